#ifndef DYNREACH_WORKLOAD_HPP
#define DYNREACH_WORKLOAD_HPP

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "dynreach/dynamic_oracle.hpp"
#include "dynreach/reference_oracles.hpp"
#include "dynreach/types.hpp"

namespace dynreach {

// ---------------------------------------------------------------------------
// Stream commands

struct InitCmd {
    std::size_t n;
    friend bool operator==(const InitCmd&, const InitCmd&) = default;
};
struct InsertCmd {
    VertexId center;
    std::vector<Edge> edges;
    friend bool operator==(const InsertCmd&, const InsertCmd&) = default;
};
struct DeleteCmd {
    std::vector<Edge> edges;
    friend bool operator==(const DeleteCmd&, const DeleteCmd&) = default;
};
struct QueryCmd {
    VertexId v;
    VertexId u;
    friend bool operator==(const QueryCmd&, const QueryCmd&) = default;
};

using StreamCommand = std::variant<InitCmd, InsertCmd, DeleteCmd, QueryCmd>;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public std::runtime_error {
public:
    ValidationError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Checked mode found the oracle disagreeing with a reference.
class CheckFailure : public std::runtime_error {
public:
    CheckFailure(std::size_t command_index, VertexId v, VertexId u, const std::string& what)
        : std::runtime_error("command " + std::to_string(command_index) + ", pair (" +
                             std::to_string(v) + "," + std::to_string(u) + "): " + what),
          index_(command_index),
          v_(v),
          u_(u) {}
    [[nodiscard]] std::size_t command_index() const noexcept { return index_; }
    [[nodiscard]] VertexId v() const noexcept { return v_; }
    [[nodiscard]] VertexId u() const noexcept { return u_; }

private:
    std::size_t index_;
    VertexId v_;
    VertexId u_;
};

// Parses the line-oriented stream format:
//
//   init <n>
//   insert <center> <a1> <b1> [<a2> <b2> ...]
//   delete <a1> <b1> [<a2> <b2> ...]
//   query <v> <u>
//   # comment
inline std::vector<StreamCommand> parse_stream(std::string_view text) {
    std::vector<StreamCommand> out;
    std::size_t n = 0;
    std::size_t line_no = 0;

    struct Token {
        std::string_view text;
        std::size_t column;
    };

    while (!text.empty()) {
        ++line_no;
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }

        std::vector<Token> tokens;
        for (std::size_t i = 0; i < line.size();) {
            if (line[i] == ' ' || line[i] == '\t') {
                ++i;
                continue;
            }
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
                ++i;
            }
            tokens.push_back({line.substr(start, i - start), start + 1});
        }
        if (tokens.empty() || tokens.front().text.front() == '#') {
            continue;
        }

        auto number = [&](const Token& t) {
            std::uint64_t value = 0;
            const char* end = t.text.data() + t.text.size();
            auto [ptr, ec] = std::from_chars(t.text.data(), end, value);
            if (ec != std::errc{} || ptr != end) {
                throw ParseError(line_no, t.column,
                                 "expected a non-negative integer, got '" + std::string(t.text) +
                                     "'");
            }
            return value;
        };
        auto vertex = [&](const Token& t) {
            const std::uint64_t value = number(t);
            if (value < 1 || value > n) {
                throw ValidationError(line_no, "vertex " + std::to_string(value) +
                                                   " outside [1, " + std::to_string(n) + "]");
            }
            return static_cast<VertexId>(value);
        };
        auto edge_list = [&](std::size_t first) {
            const std::size_t count = tokens.size() - first;
            if (count == 0 || count % 2 != 0) {
                const std::size_t col = count == 0 ? line.size() + 1 : tokens.back().column;
                throw ParseError(line_no, col, "expected a non-empty list of endpoint pairs");
            }
            std::vector<Edge> edges;
            for (std::size_t i = first; i < tokens.size(); i += 2) {
                edges.push_back({vertex(tokens[i]), vertex(tokens[i + 1])});
            }
            return edges;
        };
        auto arity = [&](std::size_t expected) {
            if (tokens.size() != expected) {
                const std::size_t col =
                    tokens.size() > expected ? tokens[expected].column : line.size() + 1;
                throw ParseError(line_no, col,
                                 "'" + std::string(tokens.front().text) + "' takes " +
                                     std::to_string(expected - 1) + " argument(s)");
            }
        };

        const std::string_view verb = tokens.front().text;
        if (verb != "init" && verb != "insert" && verb != "delete" && verb != "query") {
            throw ParseError(line_no, tokens.front().column,
                             "unknown command '" + std::string(verb) + "'");
        }
        if (verb == "init") {
            arity(2);
            const std::uint64_t value = number(tokens[1]);
            if (n != 0) {
                throw ValidationError(line_no, "init may appear only once");
            }
            if (value == 0 || value > std::uint64_t{1} << 20) {
                throw ValidationError(line_no, "vertex count out of range");
            }
            n = static_cast<std::size_t>(value);
            out.emplace_back(InitCmd{n});
            continue;
        }
        if (n == 0) {
            throw ValidationError(line_no, "'" + std::string(verb) + "' before init");
        }
        if (verb == "insert") {
            if (tokens.size() < 2) {
                throw ParseError(line_no, line.size() + 1, "insert needs a center");
            }
            const VertexId center = vertex(tokens[1]);
            out.emplace_back(InsertCmd{center, edge_list(2)});
        } else if (verb == "delete") {
            out.emplace_back(DeleteCmd{edge_list(1)});
        } else {
            arity(3);
            out.emplace_back(QueryCmd{vertex(tokens[1]), vertex(tokens[2])});
        }
    }
    if (n == 0) {
        throw ValidationError(line_no, "stream has no init command");
    }
    return out;
}

inline std::string format_command(const StreamCommand& cmd) {
    std::ostringstream os;
    auto edges = [&](const std::vector<Edge>& es) {
        for (const Edge& e : es) {
            os << ' ' << e.src << ' ' << e.dst;
        }
    };
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, InitCmd>) {
                os << "init " << c.n;
            } else if constexpr (std::is_same_v<T, InsertCmd>) {
                os << "insert " << c.center;
                edges(c.edges);
            } else if constexpr (std::is_same_v<T, DeleteCmd>) {
                os << "delete";
                edges(c.edges);
            } else {
                os << "query " << c.v << ' ' << c.u;
            }
        },
        cmd);
    return os.str();
}

// ---------------------------------------------------------------------------
// Workload generation

// Portable random source: std::mt19937_64 (its output sequence is fixed by
// the C++ standard) with integer and real mappings defined here rather than
// by the library's distributions, whose algorithms vary between vendors.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, bound) by rejection of the top partial bucket.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // 1 + number of successes of p = 1/2 trials, capped at `cap`.
    std::uint64_t geometric(std::uint64_t cap) {
        std::uint64_t k = 1;
        while (k < cap && unit() < 0.5) {
            ++k;
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
};

struct OpMix {
    double insert = 0.4;
    double del = 0.3;
    double query = 0.3;
};

enum class WorkloadModel { ErdosRenyiTouching, PathHeavy };

struct WorkloadSpec {
    std::size_t n = 20;
    std::size_t ops = 500;
    OpMix mix;
    std::uint64_t seed = 1;
    WorkloadModel model = WorkloadModel::ErdosRenyiTouching;
    // Insert-only prefix emitted until this many edges are alive; not
    // counted in `ops`.
    std::size_t warmup_edges = 0;
};

inline std::string generate_workload(const WorkloadSpec& spec) {
    const OpMix& mix = spec.mix;
    if (spec.n == 0 || spec.ops == 0) {
        throw InvalidArgument("generate_workload: n and ops must be >= 1");
    }
    if (mix.insert < 0 || mix.del < 0 || mix.query < 0 ||
        std::abs(mix.insert + mix.del + mix.query - 1.0) > 1e-9) {
        throw InvalidArgument("generate_workload: mix must be non-negative and sum to 1");
    }
    const std::size_t n = spec.n;
    if (spec.warmup_edges > n * n) {
        throw InvalidArgument("generate_workload: warmup_edges exceeds n^2");
    }
    PortableRng rng(spec.seed);
    std::vector<Edge> alive;
    std::unordered_map<Edge, std::size_t> pos;
    std::ostringstream os;
    os << "init " << n << '\n';

    auto vertex = [&] { return static_cast<VertexId>(1 + rng.below(n)); };
    auto candidate = [&](VertexId c) -> Edge {
        if (spec.model == WorkloadModel::PathHeavy && rng.unit() < 0.8) {
            const bool forward = rng.below(2) == 0;
            if (forward && c < n) {
                return {c, c + 1};
            }
            if (c > 1) {
                return {c - 1, c};
            }
            return {c, c < n ? c + 1 : c};
        }
        const VertexId w = vertex();
        return rng.below(2) == 0 ? Edge{c, w} : Edge{w, c};
    };
    auto emit_query = [&] {
        const VertexId v = vertex();
        const VertexId u = vertex();
        os << "query " << v << ' ' << u << '\n';
    };
    // Returns false when no fresh edge touching the center was found.
    auto emit_insert = [&] {
        const VertexId c = vertex();
        const std::uint64_t k = rng.geometric(n > 1 ? n - 1 : 1);
        std::vector<Edge> batch;
        for (std::uint64_t i = 0; i < k; ++i) {
            for (int attempt = 0; attempt < 8; ++attempt) {
                const Edge e = candidate(c);
                if (!pos.contains(e) && std::find(batch.begin(), batch.end(), e) == batch.end()) {
                    batch.push_back(e);
                    break;
                }
            }
        }
        if (batch.empty()) {
            return false;
        }
        os << "insert " << c;
        for (const Edge& e : batch) {
            os << ' ' << e.src << ' ' << e.dst;
            pos.emplace(e, alive.size());
            alive.push_back(e);
        }
        os << '\n';
        return true;
    };
    auto emit_delete = [&] {
        const std::uint64_t j = rng.geometric(alive.size());
        os << "delete";
        for (std::uint64_t i = 0; i < j; ++i) {
            const std::size_t at = rng.below(alive.size());
            const Edge e = alive[at];
            os << ' ' << e.src << ' ' << e.dst;
            pos[alive.back()] = at;
            alive[at] = alive.back();
            alive.pop_back();
            pos.erase(e);
        }
        os << '\n';
    };

    while (alive.size() < spec.warmup_edges) {
        emit_insert();
    }
    for (std::size_t op = 0; op < spec.ops; ++op) {
        const double r = rng.unit();
        if (r < mix.insert) {
            if (!emit_insert()) {
                emit_query();
            }
        } else if (r < mix.insert + mix.del) {
            if (alive.empty()) {
                emit_query();
            } else {
                emit_delete();
            }
        } else {
            emit_query();
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Driving the oracle

enum class RunMode { Fast, Checked };

struct RunReport {
    std::vector<bool> answers;
    CounterReport counters;
    std::uint64_t insert_ns = 0;
    std::uint64_t delete_ns = 0;
    std::uint64_t query_ns = 0;
    std::size_t checks = 0;
};

namespace detail {

inline std::size_t stream_vertex_count(const std::vector<StreamCommand>& commands) {
    if (commands.empty() || !std::holds_alternative<InitCmd>(commands.front())) {
        throw ValidationError(0, "stream must start with init");
    }
    return std::get<InitCmd>(commands.front()).n;
}

inline std::uint64_t elapsed_ns(std::chrono::steady_clock::time_point since) {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                          std::chrono::steady_clock::now() - since)
                                          .count());
}

inline void check_witnesses(const DynamicReachability& oracle, std::size_t index) {
    const auto expected = reference::witness_count_oracle(oracle);
    const std::size_t n = oracle.vertex_count();
    for (VertexId u = 1; u <= n; ++u) {
        for (VertexId z = 1; z <= n; ++z) {
            if (oracle.tcm().count(u, z) != expected[u][z]) {
                throw CheckFailure(index, u, z,
                                   "witness count " + std::to_string(oracle.tcm().count(u, z)) +
                                       ", expected " + std::to_string(expected[u][z]));
            }
        }
    }
}

}  // namespace detail

// Executes a parsed stream. Checked mode verifies every query against a
// fresh search and the witness matrix against the per-center recount after
// every update, throwing CheckFailure at the first divergence.
inline RunReport run_stream(const std::vector<StreamCommand>& commands,
                            RunMode mode = RunMode::Fast) {
    const std::size_t n = detail::stream_vertex_count(commands);
    DynamicReachability oracle(n);
    RunReport report;
    const bool checked = mode == RunMode::Checked;
    for (std::size_t i = 1; i < commands.size(); ++i) {
        const StreamCommand& cmd = commands[i];
        const auto start = std::chrono::steady_clock::now();
        if (const auto* ins = std::get_if<InsertCmd>(&cmd)) {
            oracle.insert(ins->center, ins->edges);
            report.insert_ns += detail::elapsed_ns(start);
        } else if (const auto* del = std::get_if<DeleteCmd>(&cmd)) {
            oracle.remove(del->edges);
            report.delete_ns += detail::elapsed_ns(start);
        } else if (const auto* q = std::get_if<QueryCmd>(&cmd)) {
            const bool answer = oracle.query(q->v, q->u);
            report.query_ns += detail::elapsed_ns(start);
            report.answers.push_back(answer);
            if (checked) {
                const bool truth = reference::reachable_bruteforce(
                    oracle.store().version_view(oracle.store().current_version()), n, q->v, q->u);
                ++report.checks;
                if (truth != answer) {
                    throw CheckFailure(i, q->v, q->u,
                                       std::string("query answered ") + (answer ? "1" : "0") +
                                           ", reachability is " + (truth ? "1" : "0"));
                }
            }
            continue;
        } else {
            throw ValidationError(0, "init may appear only once");
        }
        if (checked) {
            detail::check_witnesses(oracle, i);
            ++report.checks;
        }
    }
    report.counters = oracle.snapshot_counters();
    return report;
}

inline std::string format_run_report(const RunReport& report, bool with_timings = true) {
    std::ostringstream os;
    for (bool a : report.answers) {
        os << (a ? "1" : "0") << '\n';
    }
    const CounterReport& c = report.counters;
    os << "## ins " << c.ins << '\n'
       << "## del " << c.del << '\n'
       << "## queries " << report.answers.size() << '\n'
       << "## timeline " << c.timeline << '\n'
       << "## centers " << c.centers.size() << '\n'
       << "## tcm_cell_updates " << c.tcm_cell_updates << '\n'
       << "## tree_work " << c.tree_work << '\n';
    if (report.checks > 0) {
        os << "## checks " << report.checks << '\n';
    }
    if (with_timings) {
        os << "## insert_ns " << report.insert_ns << '\n'
           << "## delete_ns " << report.delete_ns << '\n'
           << "## query_ns " << report.query_ns << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Benchmark against recomputing the closure after every update

struct BenchOptions {
    // Commands [1, warmup) run on both sides but are not measured; the
    // baseline recomputes its closure once at the end of the warmup.
    std::size_t warmup = 0;
};

struct BenchReport {
    std::size_t n = 0;
    std::size_t inserts = 0;
    std::size_t deletes = 0;
    std::size_t queries = 0;
    double oracle_seconds = 0;
    double baseline_seconds = 0;
    double oracle_insert_tcm_mean = 0;
    double oracle_insert_tree_mean = 0;
    double oracle_delete_tcm_mean = 0;
    double oracle_delete_tree_mean = 0;
    double baseline_update_work_mean = 0;
    std::uint64_t oracle_insert_tcm_max = 0;
    // Mean work of an insert over mean work of a delete (tree + matrix).
    double insert_delete_ratio = 0;
    bool outputs_agree = true;
};

inline BenchReport benchmark(const std::vector<StreamCommand>& commands,
                             const BenchOptions& options = {}) {
    using clock = std::chrono::steady_clock;
    const std::size_t n = detail::stream_vertex_count(commands);
    BenchReport rep;
    rep.n = n;
    const std::size_t warmup = std::max<std::size_t>(options.warmup, 1);

    DynamicReachability oracle(n);
    std::vector<bool> oracle_answers;
    std::uint64_t ins_tcm = 0, ins_tree = 0, del_tcm = 0, del_tree = 0;
    auto t0 = clock::now();
    for (std::size_t i = 1; i < commands.size(); ++i) {
        const StreamCommand& cmd = commands[i];
        const bool measured = i >= warmup;
        const std::uint64_t tcm_before = oracle.tcm().cell_updates();
        const std::uint64_t tree_before = oracle.tree_work();
        if (const auto* ins = std::get_if<InsertCmd>(&cmd)) {
            oracle.insert(ins->center, ins->edges);
            if (measured) {
                const std::uint64_t cells = oracle.tcm().cell_updates() - tcm_before;
                ++rep.inserts;
                ins_tcm += cells;
                ins_tree += oracle.tree_work() - tree_before;
                rep.oracle_insert_tcm_max = std::max(rep.oracle_insert_tcm_max, cells);
            }
        } else if (const auto* del = std::get_if<DeleteCmd>(&cmd)) {
            oracle.remove(del->edges);
            if (measured) {
                ++rep.deletes;
                del_tcm += oracle.tcm().cell_updates() - tcm_before;
                del_tree += oracle.tree_work() - tree_before;
            }
        } else if (const auto* q = std::get_if<QueryCmd>(&cmd)) {
            oracle_answers.push_back(oracle.query(q->v, q->u));
            rep.queries += measured;
        }
    }
    rep.oracle_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    std::unordered_set<Edge> edges;
    reference::BoolMatrix closure;
    std::uint64_t baseline_work = 0;
    std::size_t baseline_updates = 0;
    std::size_t answer = 0;
    t0 = clock::now();
    auto recompute = [&](bool measured) {
        std::uint64_t visits = 0;
        closure = reference::transitive_closure_bruteforce(edges, n, &visits);
        if (measured) {
            baseline_work += visits;
            ++baseline_updates;
        }
    };
    for (std::size_t i = 1; i < commands.size(); ++i) {
        const StreamCommand& cmd = commands[i];
        const bool measured = i >= warmup;
        if (i == warmup) {
            recompute(false);
        }
        if (const auto* ins = std::get_if<InsertCmd>(&cmd)) {
            edges.insert(ins->edges.begin(), ins->edges.end());
            if (measured) {
                recompute(true);
            }
        } else if (const auto* del = std::get_if<DeleteCmd>(&cmd)) {
            for (const Edge& e : del->edges) {
                edges.erase(e);
            }
            if (measured) {
                recompute(true);
            }
        } else if (const auto* q = std::get_if<QueryCmd>(&cmd)) {
            if (!measured) {
                recompute(false);
            }
            const bool got = q->v == q->u || closure[q->v][q->u];
            if (answer >= oracle_answers.size() || oracle_answers[answer] != got) {
                rep.outputs_agree = false;
            }
            ++answer;
        }
    }
    rep.baseline_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    auto mean = [](std::uint64_t total, std::size_t count) {
        return count == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(count);
    };
    rep.oracle_insert_tcm_mean = mean(ins_tcm, rep.inserts);
    rep.oracle_insert_tree_mean = mean(ins_tree, rep.inserts);
    rep.oracle_delete_tcm_mean = mean(del_tcm, rep.deletes);
    rep.oracle_delete_tree_mean = mean(del_tree, rep.deletes);
    rep.baseline_update_work_mean = mean(baseline_work, baseline_updates);
    const double del_mean = rep.oracle_delete_tcm_mean + rep.oracle_delete_tree_mean;
    rep.insert_delete_ratio =
        del_mean == 0 ? 0.0 : (rep.oracle_insert_tcm_mean + rep.oracle_insert_tree_mean) / del_mean;
    return rep;
}

inline std::string format_bench_report(const BenchReport& r) {
    std::ostringstream os;
    os << "## n " << r.n << '\n'
       << "## inserts " << r.inserts << '\n'
       << "## deletes " << r.deletes << '\n'
       << "## queries " << r.queries << '\n'
       << "## oracle_seconds " << r.oracle_seconds << '\n'
       << "## baseline_seconds " << r.baseline_seconds << '\n'
       << "## oracle_insert_tcm_mean " << r.oracle_insert_tcm_mean << '\n'
       << "## oracle_insert_tcm_max " << r.oracle_insert_tcm_max << '\n'
       << "## oracle_insert_tree_mean " << r.oracle_insert_tree_mean << '\n'
       << "## oracle_delete_tcm_mean " << r.oracle_delete_tcm_mean << '\n'
       << "## oracle_delete_tree_mean " << r.oracle_delete_tree_mean << '\n'
       << "## baseline_update_work_mean " << r.baseline_update_work_mean << '\n'
       << "## insert_delete_ratio " << r.insert_delete_ratio << '\n'
       << "## outputs_agree " << (r.outputs_agree ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace dynreach

#endif  // DYNREACH_WORKLOAD_HPP
