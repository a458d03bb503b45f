#include <charconv>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "skysr/baselines.hpp"
#include "skysr/error.hpp"
#include "skysr/harness.hpp"
#include "skysr/result_json.hpp"
#include "skysr/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace skysr;

namespace {

struct StartArgs {
    std::optional<std::int64_t> vertex;
    std::optional<double> x, y;
    std::vector<std::string> categories;
};

void add_start_options(CLI::App* cmd, StartArgs& a) {
    auto* v = cmd->add_option("--start", a.vertex, "Start vertex id");
    auto* x = cmd->add_option("--x", a.x, "Start x coordinate, snapped to the nearest vertex");
    auto* y = cmd->add_option("--y", a.y, "Start y coordinate");
    x->needs(y);
    y->needs(x);
    v->excludes(x);
    v->excludes(y);
    cmd->add_option("--categories,-c", a.categories, "Category ids or names, in visiting order")
        ->required()
        ->expected(1, -1);
}

/// The same JSON body a client would POST, so validation is shared with the service.
json request_body(const StartArgs& a) {
    json body = json::object();
    if (a.vertex) body["start"] = *a.vertex;
    else if (a.x) body["start"] = {{"x", *a.x}, {"y", *a.y}};
    json cats = json::array();
    for (const auto& c : a.categories) {
        std::int64_t id = 0;
        auto [end, ec] = std::from_chars(c.data(), c.data() + c.size(), id);
        if (ec == std::errc{} && end == c.data() + c.size()) cats.push_back(id);
        else cats.push_back(c);
    }
    body["categories"] = cats;
    return body;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        if (comma > pos) out.push_back(s.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

std::ofstream open_out(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw InvalidArgument("cannot write " + file.string());
    return out;
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skyline sequenced route queries over categorized road networks"};
    app.require_subcommand(1);

    // query
    StartArgs qa;
    fs::path q_data;
    std::optional<double> q_timeout;
    unsigned q_mask = 0b1111;
    auto* query = app.add_subcommand("query", "Run BSSR and print the skyline as JSON");
    query->add_option("--data", q_data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    add_start_options(query, qa);
    query->add_option("--flags", q_mask, "Optimization bit mask: 1 init, 2 pq ordering, 4 lower bounds, 8 caching")
        ->check(CLI::Range(0u, 15u));
    query->add_option("--timeout-ms", q_timeout, "Abort when the query runs longer");

    // oracle
    StartArgs oa;
    fs::path o_data;
    std::uint64_t o_guard = 10'000'000;
    auto* oracle = app.add_subcommand("oracle", "Print the exhaustive skyline in the query output format");
    oracle->add_option("--data", o_data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    add_start_options(oracle, oa);
    oracle->add_option("--guard", o_guard, "Refuse instances with more candidate tuples than this");

    // gen
    fs::path g_spec, g_out;
    std::uint64_t g_seed = 1;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset (and workload.txt for bench configs)");
    gen->add_option("--spec", g_spec, "Map spec or bench config JSON")->required()->check(CLI::ExistingFile);
    gen->add_option("--seed", g_seed, "Random seed")->required();
    gen->add_option("--out", g_out, "Output directory")->required();

    // workload
    fs::path w_data, w_out;
    std::size_t w_count = 100, w_size = 3;
    std::uint64_t w_seed = 1;
    auto* workload = app.add_subcommand("workload", "Generate a query workload for a dataset");
    workload->add_option("--data", w_data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    workload->add_option("--count", w_count, "Number of queries");
    workload->add_option("--size", w_size, "Category sequence size");
    workload->add_option("--seed", w_seed, "Random seed");
    workload->add_option("--out", w_out, "Workload file")->required();

    // bench
    fs::path b_data, b_workload, b_out;
    std::string b_algos = "bssr,bssr_no_opt";
    std::string b_format = "csv";
    unsigned b_threads = 1;
    std::optional<double> b_timeout;
    auto* bench = app.add_subcommand("bench", "Run algorithms over a workload and write metrics");
    bench->add_option("--data", b_data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    bench->add_option("--workload", b_workload, "Workload file")->required()->check(CLI::ExistingFile);
    bench->add_option("--algos", b_algos, "Comma-separated algorithm names");
    bench->add_option("--out", b_out, "Per-query output file; the summary goes next to it")->required();
    bench->add_option("--format", b_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    bench->add_option("--threads", b_threads, "Worker threads (1 gives the most stable timings)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--timeout-ms", b_timeout, "Per-query limit for BSSR variants");

    // serve
    fs::path s_data;
    std::string s_host = "127.0.0.1";
    int s_port = 8080;
    unsigned s_max = 0;
    double s_timeout = 30000;
    std::optional<fs::path> s_static;
    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    serve->add_option("--data", s_data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    serve->add_option("--host", s_host, "Bind address");
    serve->add_option("--port", s_port, "Port (0 picks a free one)");
    serve->add_option("--max-concurrent", s_max, "Simultaneous engine runs (0: hardware threads)");
    serve->add_option("--timeout-ms", s_timeout, "Per-request limit");
    serve->add_option("--static", s_static, "Directory served under /")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*query || *oracle) {
            const bool is_query = query->parsed();
            const StartArgs& a = is_query ? qa : oa;
            if (!a.vertex && !a.x) throw InvalidArgument("give --start or --x/--y");
            QueryService svc(load_dataset(is_query ? q_data : o_data));
            QueryRequest req = svc.parse_request(request_body(a));
            const Dataset& d = svc.dataset();
            if (is_query) {
                req.flags = QueryFlags::from_mask(q_mask);
                QueryOptions opts;
                if (q_timeout)
                    opts.deadline = std::chrono::steady_clock::now() +
                                    std::chrono::microseconds(static_cast<std::int64_t>(*q_timeout * 1000));
                BssrResult r = run_bssr(d.graph, d.forest, req.start, req.categories, req.flags, opts);
                std::cout << render(query_response(d, req, r));
            } else {
                BaselineStats stats;
                auto t0 = std::chrono::steady_clock::now();
                auto routes = brute_force_skyline(d.graph, d.forest, req.start, req.categories, o_guard, &stats);
                double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                json out = response_json(d, req.start, req.categories, routes, counters_json(stats), ms);
                out["start"]["snapped"] = req.snapped;
                std::cout << render(out);
            }
        } else if (*gen) {
            std::ifstream in(g_spec);
            json j = json::parse(in);
            const bool is_config = j.is_object() && j.contains("map");
            BenchConfig cfg;
            if (is_config) cfg = bench_config_from_json(j);
            else cfg.map = map_spec_from_json(j);
            Dataset d = generate_synthetic_map(cfg.map, g_seed);
            write_dataset(g_out, d.graph, d.forest);
            std::cout << "wrote " << d.graph.num_vertices() << " vertices, " << d.graph.num_edges() << " edges, "
                      << d.graph.pois().size() << " PoIs, " << d.forest.size() << " categories to " << g_out.string()
                      << "\n";
            if (is_config && j.contains("workload")) {
                auto queries = generate_workload(d.graph, d.forest, cfg.workload, g_seed);
                write_workload(g_out / "workload.txt", queries);
                std::cout << "wrote " << queries.size() << " queries to " << (g_out / "workload.txt").string() << "\n";
            }
        } else if (*workload) {
            Dataset d = load_dataset(w_data);
            WorkloadSpec spec;
            spec.queries = w_count;
            spec.min_size = spec.max_size = w_size;
            auto queries = generate_workload(d.graph, d.forest, spec, w_seed);
            if (w_out.has_parent_path()) fs::create_directories(w_out.parent_path());
            write_workload(w_out, queries);
        } else if (*bench) {
            Dataset d = load_dataset(b_data);
            auto queries = load_workload(b_workload);
            auto algos = split_list(b_algos);
            for (const auto& a : algos)
                if (!is_known_algorithm(a)) throw InvalidArgument("unknown algorithm '" + a + "'");
            auto rows = run_benchmark(d, queries, algos, b_threads, b_timeout);
            auto summary = summarize(rows);
            if (b_format == "json") {
                open_out(b_out) << bench_json(rows, summary).dump(2) << "\n";
            } else {
                auto out = open_out(b_out);
                write_rows_csv(out, rows);
                fs::path sfile = b_out.parent_path() / (b_out.stem().string() + "_summary.csv");
                auto sout = open_out(sfile);
                write_summary_csv(sout, summary);
            }
            write_summary_csv(std::cout, summary);
        } else if (*serve) {
            ServiceOptions opts;
            opts.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(s_timeout));
            opts.max_concurrent = s_max;
            opts.static_dir = s_static;
            QueryService svc(load_dataset(s_data), opts);
            HttpServer server(svc);
            int port = server.bind(s_host, s_port);
            if (port < 0) throw InvalidArgument("cannot bind " + s_host + ":" + std::to_string(s_port));
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "serving " << svc.dataset().name << " on http://" << s_host << ":" << port << std::endl;
            server.listen();
            g_server = nullptr;
        }
    } catch (const QueryTimeout& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
