// moddens: modularity-density toolkit CLI.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "moddens/analytic.hpp"
#include "moddens/bipartition.hpp"
#include "moddens/detector.hpp"
#include "moddens/generators.hpp"
#include "moddens/graph.hpp"
#include "moddens/metrics.hpp"
#include "moddens/oracle.hpp"
#include "moddens/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

// Reports carry 12 significant digits.
double round12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

json metric_report_json(const moddens::MetricReport& report) {
    json clusters = json::array();
    for (const auto& s : report.per_cluster) {
        clusters.push_back({{"id", s.id},
                            {"size", s.size},
                            {"M_c", round12(s.value)},
                            {"cohesion", round12(s.cohesion)},
                            {"separation", round12(s.separation)}});
    }
    return {{"schema_version", kSchemaVersion},
            {"metric", moddens::metric_name(report.metric)},
            {"M", round12(report.value)},
            {"connected", report.connected},
            {"clusters", clusters}};
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("MODDENS_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

moddens::Metric parse_metric(const std::string& s) {
    if (s == "M") return moddens::Metric::M;
    if (s == "D") return moddens::Metric::D;
    throw CLI::ValidationError("--metric", "must be M or D");
}

std::vector<moddens::NodeId> read_node_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open proposal file: " + path);
    std::vector<moddens::NodeId> nodes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (moddens::detail::blank_or_comment(line)) continue;
        try {
            nodes.push_back(static_cast<moddens::NodeId>(std::stol(line)));
        } catch (const std::exception&) {
            moddens::detail::parse_error(path, line_no, "malformed node id");
        }
    }
    if (nodes.empty()) throw std::runtime_error(path + ": empty node list");
    return nodes;
}

int cmd_metric(const std::string& graph_file, const std::string& partition_file,
               const std::string& metric, const std::string& form) {
    const moddens::LoadedGraph lg = moddens::load_graph(graph_file);
    const moddens::Partition p =
        moddens::load_partition(partition_file, lg.graph.node_count());
    json out;
    if (parse_metric(metric) == moddens::Metric::D) {
        out = metric_report_json(moddens::li_modularity_density(lg.graph, p));
    } else {
        const moddens::MetricReport report = moddens::modularity_density_sum(lg.graph, p);
        if (form == "tensor") {
            out = {{"schema_version", kSchemaVersion},
                   {"metric", "M"},
                   {"M", round12(moddens::modularity_density_tensor(lg.graph, p))},
                   {"connected", report.connected}};
        } else {
            out = metric_report_json(report);
            if (form == "both") {
                const double tensor = moddens::modularity_density_tensor(lg.graph, p);
                const double residual = std::abs(report.value - tensor);
                out["M_tensor"] = round12(tensor);
                out["form_residual"] = residual;
                if (residual > 1e-9 * std::max(1.0, std::abs(report.value))) {
                    std::cerr << "form equivalence violated: residual " << residual << "\n";
                    std::cout << out.dump(2) << "\n";
                    return 1;
                }
            }
        }
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_generate(const std::string& family, const std::vector<int>& sizes,
                 const std::vector<double>& probs, int bridges, std::uint64_t seed,
                 const std::string& prefix) {
    moddens::GeneratorSpec spec{moddens::family_from_name(family), sizes, probs, bridges,
                                seed};
    const moddens::LabeledGraph inst = moddens::generate(spec);
    moddens::save_graph(prefix + ".edges", inst.graph);
    moddens::save_partition(prefix + ".truth", inst.truth);
    json meta = {{"schema_version", kSchemaVersion},
                 {"family", family},
                 {"sizes", sizes},
                 {"probs", probs},
                 {"bridge_count", bridges},
                 {"seed", seed},
                 {"prng", moddens::kPrngName},
                 {"nodes", inst.graph.node_count()},
                 {"edges", inst.graph.edge_count()}};
    std::ofstream(prefix + ".json") << meta.dump(2) << "\n";
    std::cout << meta.dump(2) << "\n";
    return 0;
}

int cmd_oracle(const std::string& graph_file, const std::string& metric, int max_nodes) {
    const moddens::LoadedGraph lg = moddens::load_graph(graph_file);
    const moddens::OracleResult result =
        moddens::exhaustive_best(lg.graph, parse_metric(metric), max_nodes);
    json ties = json::array();
    for (const auto& t : result.ties) ties.push_back(t);
    json out = {{"schema_version", kSchemaVersion},
                {"metric", metric},
                {"best_value", round12(result.best_value)},
                {"best_partition", result.best_assignment},
                {"partitions_evaluated", result.partitions_evaluated},
                {"tie_count", result.tie_count},
                {"ties", ties}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_bipartition(const std::string& graph_file, const std::string& partition_file,
                    const std::string& proposal_file) {
    const moddens::LoadedGraph lg = moddens::load_graph(graph_file);
    const moddens::Partition p =
        moddens::load_partition(partition_file, lg.graph.node_count());
    moddens::BipartitionProposal prop;
    prop.side_a = read_node_list(proposal_file);
    if (prop.side_a.empty()) throw std::runtime_error("empty proposal");
    prop.cluster = p.cluster_of(prop.side_a.front());
    for (const moddens::NodeId v : p.members(prop.cluster)) {
        if (std::find(prop.side_a.begin(), prop.side_a.end(), v) == prop.side_a.end()) {
            prop.side_b.push_back(v);
        }
    }
    const double direct = moddens::delta_m_direct(lg.graph, p, prop);
    const moddens::BipartitionEval eval = moddens::delta_m_decomposed(lg.graph, p, prop);
    json f = json::array(), dn = json::array();
    for (const auto& [v, x] : eval.f) f.push_back({{"node", v}, {"value", round12(x)}});
    for (const auto& [v, x] : eval.delta_n) dn.push_back({{"node", v}, {"value", round12(x)}});
    json out = {{"schema_version", kSchemaVersion},
                {"cluster", prop.cluster},
                {"delta_m", round12(eval.delta_m)},
                {"delta_m_direct", round12(direct)},
                {"delta_I_c", round12(eval.delta_I_c)},
                {"alpha", round12(eval.alpha)},
                {"beta", round12(eval.beta)},
                {"lambda", eval.degenerate ? json() : json(round12(eval.lambda))},
                {"fDf", round12(eval.fDf)},
                {"fLf", round12(eval.fLf)},
                {"degenerate", eval.degenerate},
                {"f", f},
                {"delta_N", dn}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_detect(const std::string& graph_file, const std::string& metric, std::uint64_t seed,
               int max_passes, const std::string& init, const std::string& init_partition,
               const std::string& move_order, const std::string& out_partition,
               const std::string& trace_csv) {
    const moddens::LoadedGraph lg = moddens::load_graph(graph_file);
    moddens::DetectorConfig cfg;
    cfg.metric = parse_metric(metric);
    cfg.seed = seed;
    cfg.max_passes = max_passes;
    cfg.move_order = move_order == "shuffled" ? moddens::DetectorConfig::MoveOrder::shuffled
                                              : moddens::DetectorConfig::MoveOrder::node_id;
    std::optional<moddens::Partition> given;
    if (init == "given-partition") {
        cfg.init = moddens::DetectorConfig::Init::given;
        given = moddens::load_partition(init_partition, lg.graph.node_count());
    }
    const moddens::DetectResult result =
        moddens::detect(lg.graph, cfg, given ? &*given : nullptr);
    if (!out_partition.empty()) moddens::save_partition(out_partition, result.partition);
    if (!trace_csv.empty()) {
        std::ofstream trace(trace_csv);
        trace << "step,kind,gain,value_after\n";
        trace.precision(17);
        for (std::size_t i = 0; i < result.trace.size(); ++i) {
            const auto& t = result.trace[i];
            const char* kind = t.kind == moddens::TraceStep::Kind::move    ? "move"
                               : t.kind == moddens::TraceStep::Kind::merge ? "merge"
                                                                           : "split";
            trace << i << ',' << kind << ',' << t.gain << ',' << t.value_after << '\n';
        }
    }
    json out = metric_report_json(result.report);
    out["steps"] = result.trace.size();
    out["partition"] = result.partition.assignment();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, int seeds) {
    const moddens::VerifyReport report = moddens::run_verify_suite(suite, seeds);
    int failures = 0;
    for (const auto& e : report.entries) {
        json line = {{"claim", e.claim_id}, {"params", e.params},
                     {"expected", e.expected}, {"observed", e.observed},
                     {"pass", e.pass},        {"margin", round12(e.margin)}};
        std::cout << line.dump() << "\n";
        if (!e.pass) ++failures;
    }
    std::cerr << report.entries.size() << " claims, " << failures << " failures\n";
    return failures == 0 ? 0 : 1;
}

int cmd_bench(long long max_edges, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    json points = json::array();
    std::vector<double> log_e, log_t;
    // Node count held fixed so the fit isolates scaling in the edge count.
    const int nodes = 2000;
    for (long long edges = 10000; edges <= max_edges; edges *= 10) {
        const moddens::Graph g = moddens::gen_random_connected(nodes, edges, seed);
        const moddens::Partition p = moddens::gen_random_partition(
            g.node_count(), static_cast<moddens::ClusterId>(std::sqrt(nodes)), seed + 1);
        // Warm-up evaluation, then best of three timed runs.
        moddens::modularity_density_sum(g, p);
        double best = 1e100;
        double value = 0.0;
        for (int rep = 0; rep < 3; ++rep) {
            const auto t0 = clock::now();
            value = moddens::modularity_density_sum(g, p).value;
            const auto t1 = clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        points.push_back({{"edges", edges}, {"seconds", best}, {"M", round12(value)}});
        log_e.push_back(std::log(static_cast<double>(edges)));
        log_t.push_back(std::log(best));
    }
    // Least-squares slope of log(time) vs log(edges).
    const std::size_t n = log_e.size();
    double me = 0.0, mt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        me += log_e[i];
        mt += log_t[i];
    }
    me /= n;
    mt /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (log_e[i] - me) * (log_t[i] - mt);
        den += (log_e[i] - me) * (log_e[i] - me);
    }
    json out = {{"schema_version", kSchemaVersion},
                {"seed", seed},
                {"points", points},
                {"loglog_slope", num / den}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_threshold(int lo, int hi, const std::string& out_file) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_file.empty()) {
        file.open(out_file);
        if (!file) throw std::runtime_error("cannot write " + out_file);
        os = &file;
    }
    *os << "m,n,w_M,w_D,ratio_minus_one\n";
    os->precision(12);
    for (int m = lo; m <= hi; ++m) {
        for (int n = lo; n <= hi; ++n) {
            const moddens::ThresholdResult t = moddens::threshold_result(m, n);
            *os << m << ',' << n << ',' << t.w_m << ',' << t.w_d << ','
                << t.ratio_minus_one << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modularity density toolkit"};
    app.require_subcommand(1);

    std::string graph_file, partition_file, proposal_file, metric = "M", form = "sum";
    std::string family, prefix = "out", suite = "all", init = "singletons";
    std::string init_partition, move_order = "node-id", out_partition, trace_csv, out_file;
    std::vector<int> sizes;
    std::vector<double> probs;
    int bridges = 1, max_nodes = 12, max_passes = 64, seeds = 100, lo = 3, hi = 50;
    long long max_edges = 1000000;
    std::uint64_t seed = default_seed();

    auto* metric_cmd = app.add_subcommand("metric", "evaluate a metric on a partition");
    metric_cmd->add_option("graph", graph_file)->required();
    metric_cmd->add_option("partition", partition_file)->required();
    metric_cmd->add_option("--metric", metric)->check(CLI::IsMember({"M", "D"}));
    metric_cmd->add_option("--form", form)->check(CLI::IsMember({"sum", "tensor", "both"}));

    auto* gen_cmd = app.add_subcommand("generate", "emit a synthetic labeled network");
    gen_cmd->add_option("--family", family)->required();
    gen_cmd->add_option("--sizes", sizes)->delimiter(',')->required();
    gen_cmd->add_option("--probs", probs)->delimiter(',');
    gen_cmd->add_option("--bridges", bridges);
    gen_cmd->add_option("--seed", seed);
    gen_cmd->add_option("--out", prefix);

    auto* oracle_cmd = app.add_subcommand("oracle", "exact best partition of a small graph");
    oracle_cmd->add_option("graph", graph_file)->required();
    oracle_cmd->add_option("--metric", metric)->check(CLI::IsMember({"M", "D"}));
    oracle_cmd->add_option("--max-nodes", max_nodes);

    auto* bip_cmd = app.add_subcommand("bipartition", "evaluate a proposed cluster split");
    bip_cmd->add_option("graph", graph_file)->required();
    bip_cmd->add_option("partition", partition_file)->required();
    bip_cmd->add_option("proposal", proposal_file)->required();

    auto* detect_cmd = app.add_subcommand("detect", "greedy metric maximization");
    detect_cmd->add_option("graph", graph_file)->required();
    detect_cmd->add_option("--metric", metric)->check(CLI::IsMember({"M", "D"}));
    detect_cmd->add_option("--seed", seed);
    detect_cmd->add_option("--max-passes", max_passes);
    detect_cmd->add_option("--init", init)
        ->check(CLI::IsMember({"singletons", "given-partition"}));
    detect_cmd->add_option("--partition", init_partition);
    detect_cmd->add_option("--move-order", move_order)
        ->check(CLI::IsMember({"node-id", "shuffled"}));
    detect_cmd->add_option("--out-partition", out_partition);
    detect_cmd->add_option("--trace", trace_csv);

    auto* verify_cmd = app.add_subcommand("verify", "numerical verification suites");
    verify_cmd->add_option("--suite", suite)
        ->check(CLI::IsMember({"bias", "thresholds", "bipartition-identity", "all"}));
    verify_cmd->add_option("--seeds", seeds);

    auto* bench_cmd = app.add_subcommand("bench", "metric evaluation timing");
    bench_cmd->add_option("--edges", max_edges);
    bench_cmd->add_option("--seed", seed);

    auto* thr_cmd = app.add_subcommand("threshold", "limiting bridge totals as CSV");
    thr_cmd->add_option("--min", lo);
    thr_cmd->add_option("--max", hi);
    thr_cmd->add_option("--out", out_file);

    CLI11_PARSE(app, argc, argv);

    try {
        if (metric_cmd->parsed()) return cmd_metric(graph_file, partition_file, metric, form);
        if (gen_cmd->parsed()) return cmd_generate(family, sizes, probs, bridges, seed, prefix);
        if (oracle_cmd->parsed()) return cmd_oracle(graph_file, metric, max_nodes);
        if (bip_cmd->parsed()) return cmd_bipartition(graph_file, partition_file, proposal_file);
        if (detect_cmd->parsed()) {
            return cmd_detect(graph_file, metric, seed, max_passes, init, init_partition,
                              move_order, out_partition, trace_csv);
        }
        if (verify_cmd->parsed()) return cmd_verify(suite, seeds);
        if (bench_cmd->parsed()) return cmd_bench(max_edges, seed);
        if (thr_cmd->parsed()) return cmd_threshold(lo, hi, out_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
