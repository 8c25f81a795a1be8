// Command-line surface over the residue engine: single evaluations, swept
// tables, wall-crossing reports, diagonal-family tooling, and the identity
// suites. JSON in, JSON out (CSV for sweeps); every numeric value travels
// as an exact string. Exit codes: 0 ok, 1 suite failure, 2 bad input,
// 3 internal instability.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "verlinde/engine.hpp"
#include "verlinde/formulas.hpp"
#include "verlinde/suites.hpp"
#include "verlinde/trees.hpp"

using namespace verlinde;
using nlohmann::json;

namespace {

constexpr const char* kEngineVersion = "1.0.0";
constexpr long kMaxSweepCells = 100000;

// ----------------------------------------------------------- json helpers --

json read_spec(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        text = os.str();
    } else {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open query file '" + path + "'");
        std::ostringstream os;
        os << in.rdbuf();
        text = os.str();
    }
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("query is not valid JSON: ") + e.what());
    }
}

long get_long(const json& j, const char* key, std::optional<long> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw std::invalid_argument(std::string("missing field '") + key + "'");
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw std::invalid_argument(std::string("field '") + key + "' must be an integer");
    return v.get<long>();
}

std::vector<long> get_longs(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_array()) throw std::invalid_argument(std::string("field '") + key + "' must be an array");
    std::vector<long> out;
    for (const json& x : v) {
        if (!x.is_number_integer())
            throw std::invalid_argument(std::string("field '") + key + "' must hold integers");
        out.push_back(x.get<long>());
    }
    return out;
}

CoVector parse_covector(const json& arr, const char* key) {
    if (!arr.is_array()) throw std::invalid_argument(std::string("field '") + key + "' must be an array");
    Coords c;
    for (const json& x : arr) {
        if (x.is_number_integer())
            c.emplace_back(x.get<long>());
        else if (x.is_string())
            c.push_back(rat_parse(x.get<std::string>()));
        else
            throw std::invalid_argument(std::string("field '") + key + "' must hold exact strings");
    }
    return CoVector(c);
}

LatticePoint parse_lattice(const json& arr, const char* key) {
    LatticePoint p;
    for (long v : get_longs(json{{key, arr}}, key)) p.c.emplace_back(v);
    return p;
}

json lattice_json(const LatticePoint& p) {
    json a = json::array();
    for (const Int& v : p.c) a.push_back(v.get_str());
    return a;
}

json covector_json(const CoVector& c) {
    json a = json::array();
    for (const Rat& v : c.c) a.push_back(rat_str(v));
    return a;
}

json edges_json(const OrderedTree& t) {
    json a = json::array();
    for (const Root& e : t.roots) a.push_back(json::array({e.i, e.j}));
    return a;
}

std::vector<OrderedTree> parse_basis_file(const std::string& path, int r) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open basis file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("basis file is not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument("basis file must hold an array of trees");
    std::vector<OrderedTree> out;
    for (const json& tree : j) {
        OrderedTree t;
        t.r = r;
        for (const json& edge : tree) {
            if (!edge.is_array() || edge.size() != 2)
                throw std::invalid_argument("basis edges must be [i, j] pairs");
            t.roots.emplace_back(edge[0].get<int>(), edge[1].get<int>());
        }
        out.push_back(std::move(t));
    }
    return out;
}

// ------------------------------------------------------------ query build --

struct CliOptions {
    std::string mode = "auto";  // line | vector | multi | wedge2
    std::string basis_file;
    std::string cache_dir;
    std::string output = "json";
    int jobs = 1;
};

EulerQuery build_query(const json& spec, const CliOptions& opt) {
    EulerQuery q;
    q.r = static_cast<int>(get_long(spec, "r"));
    q.g = static_cast<int>(get_long(spec, "g", 2));
    q.k = get_long(spec, "k");
    if (!spec.contains("lambda")) throw std::invalid_argument("missing field 'lambda'");
    q.lambda = parse_lattice(spec.at("lambda"), "lambda");
    if (spec.contains("nu")) {
        const json& nu = spec.at("nu");
        if (nu.is_array() && !nu.empty() && nu[0].is_array()) {
            for (const json& one : nu) q.nus.push_back(get_longs(json{{"nu", one}}, "nu"));
            if (!q.nus.empty()) q.nu = q.nus.front();
        } else {
            q.nu = get_longs(spec, "nu");
        }
    }
    if (spec.contains("nus")) {
        for (const json& one : spec.at("nus")) q.nus.push_back(get_longs(json{{"nus", one}}, "nus"));
        if (q.nu.empty() && !q.nus.empty()) q.nu = q.nus.front();
    }
    if (!spec.contains("c")) throw std::invalid_argument("missing field 'c'");
    q.c = parse_covector(spec.at("c"), "c");
    if (!opt.basis_file.empty()) q.basis = parse_basis_file(opt.basis_file, q.r);
    return q;
}

std::string resolve_mode(const EulerQuery& q, const std::string& mode) {
    if (mode != "auto") return mode;
    if (!q.nus.empty()) return "multi";
    if (!q.nu.empty()) return "vector";
    return "line";
}

// Chamber class: per family member, the integral floors of c's expansion;
// the result depends on c only through this table.
json chamber_class(const EulerQuery& q) {
    json out = json::array();
    for (const OrderedTree& B : q.diagonal()) {
        std::vector<Rat> t = expand_in_basis(q.c, B);
        json floors = json::array();
        for (const Rat& x : t) floors.push_back(rat_floor(x).get_str());
        out.push_back(floors);
    }
    return out;
}

json window_metadata(const EulerQuery& q, int m) {
    json out = json::array();
    for (const OrderedTree& B : q.diagonal()) {
        Windows w = window_plan(q.g, q.r, Int(q.k), m, B);
        out.push_back(json{{"lo", w.lo}, {"hi", w.hi}});
    }
    return out;
}

json echo_inputs(const EulerQuery& q, const std::string& mode) {
    json in{{"r", q.r}, {"g", q.g}, {"k", q.k}, {"lambda", lattice_json(q.lambda)},
            {"c", covector_json(q.c)}, {"mode", mode}};
    if (!q.nu.empty()) in["nu"] = q.nu;
    if (!q.nus.empty()) {
        json ns = json::array();
        for (const HighestWeight& n : q.nus) ns.push_back(n);
        in["nus"] = ns;
    }
    if (!q.basis.empty()) {
        json b = json::array();
        for (const OrderedTree& t : q.basis) b.push_back(edges_json(t));
        in["basis"] = b;
    }
    return in;
}

json evaluate_record(const EulerQuery& q, const std::string& mode) {
    auto t0 = std::chrono::steady_clock::now();
    Int value;
    std::vector<std::pair<OrderedTree, Rat>> per_basis;
    int m = 0;
    if (mode == "line") {
        ChiResult r = chi_line(q);
        value = r.value;
        per_basis = r.per_basis;
    } else if (mode == "vector") {
        ChiResult r = chi_vector(q);
        value = r.value;
        per_basis = r.per_basis;
        m = 1;
    } else if (mode == "multi") {
        EulerQuery qq = q;
        if (qq.nus.empty() && !qq.nu.empty()) qq.nus = {qq.nu};
        value = chi_multi(qq);
        m = static_cast<int>(qq.nus.size());
    } else if (mode == "wedge2") {
        value = chi_wedge2(q);
        m = 2;
    } else {
        throw std::invalid_argument("unknown mode '" + mode + "'");
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();

    json contributions = json::array();
    for (const auto& [tree, contrib] : per_basis)
        contributions.push_back(json{{"tree", edges_json(tree)}, {"value", rat_str(contrib)}});

    return json{{"inputs", echo_inputs(q, mode)},
                {"chamber", chamber_class(q)},
                {"value", value.get_str()},
                {"per_basis", contributions},
                {"timing_ms", ms},
                {"window_plan", window_metadata(q, m)},
                {"engine_version", kEngineVersion}};
}

// ---------------------------------------------------------------- chi ------

int cmd_chi(const json& spec, const CliOptions& opt) {
    EulerQuery q = build_query(spec, opt);
    if (opt.output != "json") throw std::invalid_argument("csv output is only available for sweeps");
    std::cout << evaluate_record(q, resolve_mode(q, opt.mode)).dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- sweep ----

struct Range {
    long from = 0;
    long to = -1;   // empty when to < from
    bool to_is_k = false;
};

Range parse_range(const json& j, const char* key) {
    Range r;
    if (!j.is_object()) throw std::invalid_argument(std::string("range '") + key + "' must be an object");
    r.from = get_long(j, "from");
    const json& to = j.at("to");
    if (to.is_string() && to.get<std::string>() == "k")
        r.to_is_k = true;
    else if (to.is_number_integer())
        r.to = to.get<long>();
    else
        throw std::invalid_argument(std::string("range '") + key + "' needs an integer 'to' (or \"k\")");
    return r;
}

int cmd_sweep(const json& spec, const CliOptions& opt) {
    if (!spec.contains("sweep") || !spec.at("sweep").is_object())
        throw std::invalid_argument("sweep requires a 'sweep' object with ranges");
    const json& sw = spec.at("sweep");

    const int r = static_cast<int>(get_long(spec, "r"));
    Range kr{get_long(spec, "k", 0), get_long(spec, "k", -1), false};  // single cell by default
    if (sw.contains("k")) kr = parse_range(sw.at("k"), "k");
    else if (!spec.contains("k")) throw std::invalid_argument("missing field 'k'");

    std::optional<Range> l1r, l2r;
    if (sw.contains("lambda1")) l1r = parse_range(sw.at("lambda1"), "lambda1");
    if (sw.contains("lambda2")) {
        if (r < 3) throw std::invalid_argument("'lambda2' range needs rank at least 3");
        l2r = parse_range(sw.at("lambda2"), "lambda2");
    }

    // enumerate cells in lexicographic (k, lambda1, lambda2) order
    struct Cell {
        long k, l1, l2;
    };
    std::vector<Cell> cells;
    for (long k = kr.from; k <= (kr.to_is_k ? kr.from : kr.to); ++k) {
        long l1_from = l1r ? l1r->from : 0, l1_to = l1r ? (l1r->to_is_k ? k : l1r->to) : 0;
        for (long l1 = l1_from; l1 <= l1_to; ++l1) {
            long l2_from = l2r ? l2r->from : 0, l2_to = l2r ? (l2r->to_is_k ? k : l2r->to) : 0;
            for (long l2 = l2_from; l2 <= l2_to; ++l2) {
                cells.push_back({k, l1, l2});
                if (static_cast<long>(cells.size()) > kMaxSweepCells)
                    throw std::invalid_argument("sweep exceeds the cell budget");
            }
        }
    }

    std::vector<json> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(cells.size());
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            try {
                json cell_spec = spec;
                cell_spec["k"] = cells[i].k;
                std::vector<long> lam(r, 0);
                lam[0] = cells[i].l1;
                if (l2r) lam[1] = cells[i].l2;
                lam[r - 1] = -cells[i].l1 - (l2r ? cells[i].l2 : 0);
                cell_spec["lambda"] = lam;
                EulerQuery q = build_query(cell_spec, opt);
                rows[i] = evaluate_record(q, resolve_mode(q, opt.mode));
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    int jobs = std::max(1, opt.jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    for (const std::string& e : errors)
        if (!e.empty()) throw std::invalid_argument(e);

    if (opt.output == "csv") {
        std::cout << "r,g,k,lambda,nu,mode,value\n";
        for (const json& row : rows) {
            const json& in = row.at("inputs");
            std::ostringstream lam, nu;
            for (const auto& x : in.at("lambda")) lam << (lam.tellp() > 0 ? " " : "") << x.get<std::string>();
            if (in.contains("nu"))
                for (const auto& x : in.at("nu")) nu << (nu.tellp() > 0 ? " " : "") << x.get<long>();
            std::cout << in.at("r").get<int>() << "," << in.at("g").get<int>() << ","
                      << in.at("k").get<long>() << "," << lam.str() << "," << nu.str() << ","
                      << in.at("mode").get<std::string>() << "," << row.at("value").get<std::string>()
                      << "\n";
        }
    } else {
        json out{{"cells", rows.size()}, {"rows", rows}};
        std::cout << out.dump(2) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------- wallcross ---

int cmd_wallcross(const json& spec, const CliOptions& opt) {
    if (opt.output != "json") throw std::invalid_argument("csv output is only available for sweeps");
    EulerQuery q = build_query(spec, opt);
    if (!spec.contains("wall") || !spec.at("wall").is_object())
        throw std::invalid_argument("wallcross requires a 'wall' object");
    const json& w = spec.at("wall");
    WallSpec wall;
    wall.r = q.r;
    for (long v : get_longs(w, "pi_prime")) wall.pi_prime.push_back(static_cast<int>(v));
    wall.level = Int(get_long(w, "level", 0));

    auto t0 = std::chrono::steady_clock::now();
    Int residue = wallcross_residue(q, wall);

    // geometric difference: the same query reflected to the lower side
    ChiResult upper = q.nu.empty() ? chi_line(q) : chi_vector(q);
    Rat sum = 0;
    for (int i : wall.pi_prime) sum += q.c.c[i - 1];
    EulerQuery qdn = q;
    // reflect the wall coordinate sum just below the wall level, keeping
    // the other gaps: mirror c across the wall within its alcove cell
    {
        Rat level(wall.level);
        Rat excess = sum - level;
        // move 2*excess off the wall block, distributed to keep sum-zero
        int inside = static_cast<int>(wall.pi_prime.size());
        int outside = q.r - inside;
        Coords cc = q.c.c;
        for (int i : wall.pi_prime) cc[i - 1] -= 2 * excess / inside;
        std::vector<bool> in(q.r + 1, false);
        for (int i : wall.pi_prime) in[i] = true;
        for (int i = 1; i <= q.r; ++i)
            if (!in[i]) cc[i - 1] += 2 * excess / outside;
        qdn.c = CoVector(cc);
    }
    ChiResult lower = qdn.nu.empty() ? chi_line(qdn) : chi_vector(qdn);
    Int diff = upper.value - lower.value;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();

    json out{{"inputs", echo_inputs(q, q.nu.empty() ? "line" : "vector")},
             {"wall", json{{"pi_prime", wall.pi_prime}, {"level", wall.level.get_str()}}},
             {"upper_value", upper.value.get_str()},
             {"lower_value", lower.value.get_str()},
             {"lower_c", covector_json(qdn.c)},
             {"geometric_difference", diff.get_str()},
             {"residue_value", residue.get_str()},
             {"equal", residue == diff},
             {"timing_ms", ms},
             {"engine_version", kEngineVersion}};
    std::cout << out.dump(2) << "\n";
    return out.at("equal").get<bool>() ? 0 : 1;
}

// ------------------------------------------------------------- diagonal ----

// Independent recount of the off-diagonal vanishing: map each edge of B2
// to the smallest B1-edge index on the B1-path joining its endpoints; the
// iterated residue of B2's form against B1's variables is nonzero exactly
// when that map is a bijection, so off-diagonal pairs must fail it.
bool min_index_bijection(const OrderedTree& B1, const OrderedTree& B2) {
    const int r = B1.r;
    std::vector<std::vector<std::pair<int, int>>> adj(r + 1);  // vertex -> (next, edge idx)
    for (int e = 0; e < r - 1; ++e) {
        adj[B1.roots[e].i].push_back({B1.roots[e].j, e});
        adj[B1.roots[e].j].push_back({B1.roots[e].i, e});
    }
    std::vector<bool> used(r - 1, false);
    for (const Root& edge : B2.roots) {
        std::vector<int> prev_v(r + 1, 0), prev_e(r + 1, -1);
        std::vector<int> stack{edge.i};
        prev_v[edge.i] = edge.i;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [w, e] : adj[v])
                if (prev_e[w] < 0 && w != edge.i) {
                    prev_v[w] = v;
                    prev_e[w] = e;
                    stack.push_back(w);
                }
        }
        int min_idx = r;
        for (int v = edge.j; v != edge.i; v = prev_v[v]) min_idx = std::min(min_idx, prev_e[v]);
        if (used[min_idx]) return false;
        used[min_idx] = true;
    }
    return true;
}

int cmd_diagonal(int r, const CliOptions& opt) {
    if (opt.output != "json") throw std::invalid_argument("csv output is only available for sweeps");
    if (r < 2 || r > 5) throw std::invalid_argument("rank must be between 2 and 5");
    std::vector<OrderedTree> D = enumerate_diagonal(r);

    long spanning = 0, diagonal_pairs = 0, offdiag_failures = 0;
    for (const OrderedTree& t : D)
        if (is_spanning_tree(t)) ++spanning;
    for (std::size_t a = 0; a < D.size(); ++a)
        for (std::size_t b = 0; b < D.size(); ++b) {
            bool bij = min_index_bijection(D[a], D[b]);
            if (a == b && bij) ++diagonal_pairs;
            if (a != b && bij) ++offdiag_failures;
        }

    long fact = 1;
    for (int i = 2; i < r; ++i) fact *= i;
    bool certified = is_diagonal(D) && spanning == static_cast<long>(D.size()) &&
                     diagonal_pairs == static_cast<long>(D.size()) && offdiag_failures == 0 &&
                     static_cast<long>(D.size()) == fact;

    json trees = json::array();
    for (const OrderedTree& t : D) trees.push_back(edges_json(t));
    json out{{"r", r},
             {"trees", trees},
             {"certified", certified},
             {"transcript",
              json{{"members", D.size()},
                   {"expected_members", fact},
                   {"spanning_trees", spanning},
                   {"diagonal_pairs_nonzero", diagonal_pairs},
                   {"off_diagonal_nonzero", offdiag_failures},
                   {"ordered_pairs_checked", static_cast<long>(D.size() * D.size())}}},
             {"engine_version", kEngineVersion}};
    std::cout << out.dump(2) << "\n";
    return certified ? 0 : 1;
}

// ------------------------------------------------------------- verify ------

int cmd_verify(const std::string& suite, const CliOptions& opt) {
    if (opt.output != "json") throw std::invalid_argument("csv output is only available for sweeps");
    SuiteReport rep = run_suite(suite, std::max(1, opt.jobs));
    json checks = json::array();
    for (const CheckResult& c : rep.checks) {
        json row{{"name", c.name}, {"ok", c.ok}};
        if (!c.ok) row["counterexample"] = c.detail;
        checks.push_back(row);
    }
    EngineCounters ec = engine_counters();
    json out{{"suite", rep.suite},
             {"checks", checks},
             {"passed", static_cast<long>(rep.checks.size()) - rep.failures()},
             {"failed", rep.failures()},
             {"counters", json{{"stability_checks", ec.stability_checks},
                               {"stability_retries", ec.stability_retries},
                               {"integrality_checks", ec.integrality_checks}}},
             {"engine_version", kEngineVersion}};
    std::cout << out.dump(2) << "\n";
    return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Euler characteristics over moduli of parabolic bundles"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string spec_path = "-";
    int rank = 3;
    std::string suite;

    auto add_common = [&](CLI::App* sub, bool with_spec) {
        sub->add_option("--mode", opt.mode, "line | vector | multi | wedge2 (default: infer)");
        sub->add_option("--basis-file", opt.basis_file, "JSON file with an ordered tree family");
        sub->add_option("--cache-dir", opt.cache_dir, "weight-table cache directory");
        sub->add_option("--jobs", opt.jobs, "work pool width");
        sub->add_option("--output", opt.output, "json | csv (csv: sweeps only)");
        if (with_spec) sub->add_option("spec", spec_path, "query JSON file, or - for stdin");
    };

    CLI::App* chi = app.add_subcommand("chi", "evaluate one Euler characteristic");
    add_common(chi, true);
    CLI::App* sweep = app.add_subcommand("sweep", "evaluate a parameter sweep");
    add_common(sweep, true);
    CLI::App* wallcross = app.add_subcommand("wallcross", "compare chamber jump with the wall residue");
    add_common(wallcross, true);
    CLI::App* diagonal = app.add_subcommand("diagonal", "emit a certified diagonal family");
    add_common(diagonal, false);
    diagonal->add_option("--rank,-r", rank, "rank (2..5)")->required();
    CLI::App* verify = app.add_subcommand("verify", "run one identity suite");
    add_common(verify, false);
    verify->add_option("suite", suite, "rank2|facts|wallcross|symmetry|characters|engine|oracle")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!opt.cache_dir.empty())
            set_weight_table_cache_dir(opt.cache_dir);
        else if (const char* env = std::getenv("VERLINDE_CACHE_DIR"))
            set_weight_table_cache_dir(env);

        if (chi->parsed()) return cmd_chi(read_spec(spec_path), opt);
        if (sweep->parsed()) return cmd_sweep(read_spec(spec_path), opt);
        if (wallcross->parsed()) return cmd_wallcross(read_spec(spec_path), opt);
        if (diagonal->parsed()) return cmd_diagonal(rank, opt);
        if (verify->parsed()) return cmd_verify(suite, opt);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const WindowInstability& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
