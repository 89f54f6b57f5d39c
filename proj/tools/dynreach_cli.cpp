// dynreach: drive the dynamic reachability oracle from update streams.
//
//   dynreach run <file> [--checked]
//   dynreach gen --n N --ops K --mix I,D,Q --seed S --model {er,path}
//   dynreach bench <file> [--warmup N]
//   dynreach dump-tcm <file>
//
// Exit codes: 0 success, 1 parse/validation error, 2 check failure.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "dynreach/dynreach.hpp"

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw dynreach::ValidationError(0, "cannot open '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

dynreach::OpMix parse_mix(const std::string& text) {
    dynreach::OpMix mix;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> mix.insert >> c1 >> mix.del >> c2 >> mix.query) || c1 != ',' || c2 != ',' ||
        !(is >> std::ws).eof()) {
        throw dynreach::InvalidArgument("--mix expects three comma-separated numbers");
    }
    return mix;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fully dynamic reachability oracle harness"};
    app.require_subcommand(1);

    std::string file;
    bool checked = false;
    auto* run = app.add_subcommand("run", "execute a stream and print query answers");
    run->add_option("file", file, "stream file ('-' for stdin)")->required();
    run->add_flag("--checked", checked, "verify against brute-force oracles after every step");

    dynreach::WorkloadSpec spec;
    std::string mix_text = "0.4,0.3,0.3";
    std::string model = "er";
    auto* gen = app.add_subcommand("gen", "generate a random stream");
    gen->add_option("--n", spec.n, "vertex count")->required();
    gen->add_option("--ops", spec.ops, "number of commands after init")->required();
    gen->add_option("--mix", mix_text, "insert,delete,query probabilities");
    gen->add_option("--seed", spec.seed, "generator seed");
    gen->add_option("--model", model, "er (erdos-renyi-touching) or path (path-heavy)")
        ->check(CLI::IsMember({"er", "erdos-renyi-touching", "path", "path-heavy"}));
    gen->add_option("--warmup-edges", spec.warmup_edges,
                    "insert-only prefix until this many edges are alive");

    std::size_t warmup = 0;
    auto* bench = app.add_subcommand("bench", "compare against recompute-from-scratch");
    bench->add_option("file", file, "stream file ('-' for stdin)")->required();
    bench->add_option("--warmup", warmup, "unmeasured leading commands");

    auto* dump = app.add_subcommand("dump-tcm", "print the witness matrix after a stream");
    dump->add_option("file", file, "stream file ('-' for stdin)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            spec.mix = parse_mix(mix_text);
            spec.model = (model == "path" || model == "path-heavy")
                             ? dynreach::WorkloadModel::PathHeavy
                             : dynreach::WorkloadModel::ErdosRenyiTouching;
            std::cout << dynreach::generate_workload(spec);
            return 0;
        }
        const auto commands = dynreach::parse_stream(slurp(file));
        if (*run) {
            const auto report = dynreach::run_stream(
                commands, checked ? dynreach::RunMode::Checked : dynreach::RunMode::Fast);
            std::cout << dynreach::format_run_report(report);
        } else if (*bench) {
            const auto report = dynreach::benchmark(commands, {warmup});
            std::cout << dynreach::format_bench_report(report);
            if (!report.outputs_agree) {
                std::cerr << "dynreach: oracle and baseline disagree\n";
                return 2;
            }
        } else if (*dump) {
            const std::size_t n = std::get<dynreach::InitCmd>(commands.front()).n;
            dynreach::DynamicReachability oracle(n);
            for (std::size_t i = 1; i < commands.size(); ++i) {
                if (const auto* ins = std::get_if<dynreach::InsertCmd>(&commands[i])) {
                    oracle.insert(ins->center, ins->edges);
                } else if (const auto* del = std::get_if<dynreach::DeleteCmd>(&commands[i])) {
                    oracle.remove(del->edges);
                }
            }
            oracle.tcm().dump(std::cout);
        }
    } catch (const dynreach::CheckFailure& e) {
        std::cerr << "dynreach: check failure at " << e.what() << '\n';
        return 2;
    } catch (const dynreach::ParseError& e) {
        std::cerr << "dynreach: parse error at " << e.what() << '\n';
        return 1;
    } catch (const dynreach::ValidationError& e) {
        std::cerr << "dynreach: invalid stream at " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "dynreach: " << e.what() << '\n';
        return 1;
    } catch (const dynreach::InvariantViolation& e) {
        std::cerr << "dynreach: internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
