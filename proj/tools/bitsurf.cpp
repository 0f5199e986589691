// bitsurf: command-line front end for the cover-time, codebook, energy and
// network-simulation library.

#include "bitsurf/codebook.hpp"
#include "bitsurf/cover_time.hpp"
#include "bitsurf/energy.hpp"
#include "bitsurf/metrics_io.hpp"
#include "bitsurf/netsim.hpp"
#include "bitsurf/stats.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace bitsurf;
using namespace bitsurf::netsim;

namespace {

const std::vector<std::size_t> kCongestionLevels = {1, 10, 20, 40, 60, 80, 100};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

Word parse_word_flag(const std::string& flag, const std::string& text) {
    try {
        return Word::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(flag + ": " + e.what());
    }
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

// ---------------------------------------------------------------------------

struct CoverArgs {
    std::string word;
    double rate = 1e6;
};

int cmd_cover(const CoverArgs& a) {
    const Word w = parse_word_flag("--word", a.word);
    if (!(a.rate > 0)) throw std::invalid_argument("--rate: must be positive");
    const auto r = cover_time(w);
    std::string chain;
    for (const auto& f : r.failure_chain) chain += (chain.empty() ? "" : ",") + f.str();
    std::cout << "word: " << w.str() << "\n"
              << "expected_bits: " << to_string(r.expected_bits) << "\n"
              << "failure_chain: " << (chain.empty() ? "-" : chain) << "\n"
              << "seconds: " << fmt(r.as_double() / a.rate) << "\n";
    return 0;
}

struct CodebookArgs {
    std::string prefix;
    std::size_t word_size = 0;
    std::string emit;
    bool stats = false;
};

int cmd_codebook(const CodebookArgs& a) {
    const Word prefix = parse_word_flag("--prefix", a.prefix);
    const Codebook cb = Codebook::enumerate(prefix, a.word_size);
    std::cout << "prefix: " << prefix.str() << "\n"
              << "word_size: " << a.word_size << "\n"
              << "count: " << cb.size() << "\n"
              << "payload_bits: " << cb.payload_bits() << "\n";
    if (a.stats) {
        const auto s = codebook_cover_stats(cb);
        std::cout << "cover_min: " << fmt(s.min) << "\n"
                  << "cover_q1: " << fmt(s.q1) << "\n"
                  << "cover_median: " << fmt(s.median) << "\n"
                  << "cover_q3: " << fmt(s.q3) << "\n"
                  << "cover_max: " << fmt(s.max) << "\n"
                  << "cover_mean: " << fmt(s.mean) << "\n"
                  << "cover_variance: " << fmt(s.variance) << "\n";
    }
    if (!a.emit.empty()) {
        auto out = open_out(a.emit);
        write_codebook(out, cb);
        std::cout << "written: " << a.emit << "\n";
    }
    return 0;
}

struct PrefixScanArgs {
    std::size_t word_size = 0;
    std::size_t prefix_size = 0;
};

int cmd_prefix_scan(const PrefixScanArgs& a) {
    if (a.prefix_size == 0) {
        const auto best = best_size_per_prefix_length(a.word_size);
        std::cout << "prefix_size,best_count\n";
        for (std::size_t p = 0; p < best.size(); ++p) {
            if (best[p] > 0) std::cout << p + 1 << "," << best[p] << "\n";
        }
        std::cout << "optimal_prefix_size: " << optimal_prefix_size(a.word_size) << "\n";
        return 0;
    }
    const auto ranking = best_prefixes(a.word_size, a.prefix_size);
    std::cout << "prefix,count\n";
    for (const auto& pc : ranking) std::cout << pc.prefix.str() << "," << pc.count << "\n";
    std::size_t tied = 0;
    while (tied < ranking.size() && ranking[tied].count == ranking.front().count) ++tied;
    std::cout << "tied_maxima: " << tied << "\n";
    return 0;
}

struct PerpetualArgs {
    double epsilon = 1e-12;
    double harvest = 16e-12;
    double rate = 1e6;
};

int cmd_perpetual(const PerpetualArgs& a) {
    const energy::EnergyParams p{a.epsilon, a.harvest, a.rate};
    p.validate();
    std::cout << "word_size: " << energy::min_word_size(p) << "\n"
              << "cover_time_s: " << fmt(energy::perpetual_cover_time(p)) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct SimArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> congestion;
    std::optional<std::size_t> phases;
    std::optional<std::string> rx_policy;
    std::optional<bool> forwarder_as_sender;
    std::string out = "sim_out";
    std::string format = "csv";
};

void print_row(const SummaryRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "congestion %llu: created %llu delivered %llu (%.2f%%) lost %llu mean_tx_cover %.0f ticks "
                  "mean_queue_delay %.0f ticks max_rx_busy %llu ticks\n",
                  static_cast<unsigned long long>(r.congestion), static_cast<unsigned long long>(r.created),
                  static_cast<unsigned long long>(r.delivered), 100.0 * r.delivery_rate,
                  static_cast<unsigned long long>(r.created - r.delivered), r.mean_tx_cover, r.mean_queue_delay,
                  static_cast<unsigned long long>(r.max_rx_busy));
    std::cout << buf;
}

int cmd_simulate(const SimArgs& a) {
    SimConfig c = a.config.empty() ? SimConfig{} : load_sim_config(a.config);
    if (a.seed) c.seed = *a.seed;
    if (a.congestion) c.congestion = *a.congestion;
    if (a.phases) c.phases = *a.phases;
    if (a.rx_policy) c.rx_policy = parse_rx_policy(*a.rx_policy);
    if (a.forwarder_as_sender) c.forwarder_as_sender = *a.forwarder_as_sender;
    const auto format = parse_output_format(a.format);
    c.validate();

    const Metrics m = run_simulation(c);
    const SummaryRow row = summarize(c.congestion, 1, m);
    export_metrics({row}, m, a.out, format);
    {
        auto cfg = open_out(fs::path(a.out) / "config.json");
        cfg << sim_config_to_json(c) << "\n";
    }
    print_row(row);
    return 0;
}

// ---------------------------------------------------------------------------

struct ReproduceArgs {
    std::string target;
    std::string out = "repro";
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::size_t phases = 100;
    std::size_t jobs = 1;
};

struct LevelResult {
    std::size_t congestion;
    Metrics pooled;
};

std::vector<LevelResult> sweep(const std::vector<std::size_t>& levels, const ReproduceArgs& a) {
    struct Job {
        std::size_t level;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (auto level : levels)
        for (auto seed : a.seeds) jobs.push_back({level, seed});

    std::vector<Metrics> results(jobs.size());
    const std::size_t width = std::max<std::size_t>(1, a.jobs);
    for (std::size_t first = 0; first < jobs.size(); first += width) {
        std::vector<std::future<Metrics>> batch;
        for (std::size_t i = first; i < std::min(jobs.size(), first + width); ++i) {
            SimConfig c;
            c.seed = jobs[i].seed;
            c.congestion = jobs[i].level;
            c.phases = a.phases;
            batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async,
                                       [c] { return run_simulation(c); }));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) results[first + k] = batch[k].get();
    }

    std::vector<LevelResult> out;
    for (std::size_t li = 0; li < levels.size(); ++li) {
        LevelResult lr{levels[li], {}};
        for (std::size_t si = 0; si < a.seeds.size(); ++si) merge_metrics(lr.pooled, results[li * a.seeds.size() + si]);
        out.push_back(std::move(lr));
    }
    return out;
}

double fraction_at_most(const std::vector<std::uint64_t>& v, double x) {
    return stats::fraction_at_most(std::span<const std::uint64_t>(v), x);
}

int cmd_reproduce(const ReproduceArgs& a) {
    const fs::path dir = a.out;
    fs::create_directories(dir);
    const auto& t = a.target;

    if (t == "table1" || t == "fig8") {
        const auto levels = sweep(kCongestionLevels, a);
        std::vector<SummaryRow> rows;
        for (const auto& lr : levels) rows.push_back(summarize(lr.congestion, a.seeds.size(), lr.pooled));
        if (t == "table1") {
            auto out = open_out(dir / "table1.csv");
            write_summary_csv(out, rows);
            for (const auto& r : rows) print_row(r);
        } else {
            auto out = open_out(dir / "fig8.csv");
            out << "congestion,mean_tx_cover,mean_queue_delay\n";
            for (const auto& r : rows) {
                out << r.congestion << "," << fmt(r.mean_tx_cover) << "," << fmt(r.mean_queue_delay) << "\n";
                std::cout << "congestion " << r.congestion << ": mean_tx_cover " << fmt(r.mean_tx_cover)
                          << " mean_queue_delay " << fmt(r.mean_queue_delay) << "\n";
            }
        }
        return 0;
    }
    if (t == "fig9" || t == "fig10") {
        const auto levels = sweep({100}, a);
        const Metrics& m = levels.front().pooled;
        if (t == "fig9") {
            write_samples(dir / "fig9_tx_cover.txt", m.tx_cover_times);
            const auto sorted = stats::sorted_copy(std::span<const std::uint64_t>(m.tx_cover_times));
            std::cout << "samples: " << sorted.size() << "\n"
                      << "p80_tx_cover: " << fmt(stats::quantile_sorted(sorted, 0.8)) << "\n"
                      << "fraction_le_65536: " << fmt(fraction_at_most(m.tx_cover_times, 65536)) << "\n"
                      << "fraction_le_327680: " << fmt(fraction_at_most(m.tx_cover_times, 327680)) << "\n";
        } else {
            write_samples(dir / "fig10_rx_busy.txt", m.rx_busy_times);
            const auto max = m.rx_busy_times.empty()
                                  ? 0
                                  : *std::max_element(m.rx_busy_times.begin(), m.rx_busy_times.end());
            std::cout << "samples: " << m.rx_busy_times.size() << "\n"
                      << "max_rx_busy: " << max << "\n";
        }
        return 0;
    }
    if (t == "fig2" || t == "fig3") {
        auto out = open_out(dir / (t + ".csv"));
        out << "rate_bps,word_size,cover_time_s\n";
        for (double rate = 1e3; rate <= 1e12 * 1.0001; rate *= 10) {
            const energy::EnergyParams p{1e-12, 16e-12, rate};
            out << fmt(rate) << "," << energy::min_word_size(p) << "," << fmt(energy::perpetual_cover_time(p))
                << "\n";
        }
        std::cout << "written: " << (dir / (t + ".csv")).string() << "\n";
        return 0;
    }
    if (t == "fig4" || t == "fig5") {
        auto out = open_out(dir / (t + ".csv"));
        out << "word_size,prefix_size,best_count\n";
        for (std::size_t ws = 11; ws <= 21; ++ws) {
            const auto best = best_size_per_prefix_length(ws);
            for (std::size_t p = 0; p < best.size(); ++p)
                if (best[p] > 0) out << ws << "," << p + 1 << "," << best[p] << "\n";
            std::cout << "word_size " << ws << ": optimal_prefix_size " << optimal_prefix_size(ws) << "\n";
        }
        return 0;
    }
    if (t == "fig6") {
        auto out = open_out(dir / "fig6.csv");
        out << "prefix,count\n";
        for (const auto& pc : best_prefixes(16, 4)) out << pc.prefix.str() << "," << pc.count << "\n";
        std::cout << "written: " << (dir / "fig6.csv").string() << "\n";
        return 0;
    }
    if (t == "fig7") {
        auto out = open_out(dir / "fig7.csv");
        out << "prefix,count,min,q1,median,q3,max,mean\n";
        const auto ranking = best_prefixes(16, 4);
        for (const auto& pc : ranking) {
            if (pc.count != ranking.front().count) break;
            const auto s = codebook_cover_stats(Codebook::enumerate(pc.prefix, 16));
            out << pc.prefix.str() << "," << pc.count << "," << fmt(s.min) << "," << fmt(s.q1) << ","
                << fmt(s.median) << "," << fmt(s.q3) << "," << fmt(s.max) << "," << fmt(s.mean) << "\n";
        }
        std::cout << "written: " << (dir / "fig7.csv").string() << "\n";
        return 0;
    }
    throw std::invalid_argument("target: unknown '" + t + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BitSurfing toolkit: cover times, codebooks, perpetual sizing and network simulation"};
    app.require_subcommand(1, 1);

    CoverArgs cover;
    auto* c_cover = app.add_subcommand("cover", "Expected cover time of a word");
    c_cover->add_option("--word", cover.word, "Word as a 0/1 string")->required();
    c_cover->add_option("--rate", cover.rate, "Source rate in bits per second")->capture_default_str();

    CodebookArgs cb;
    auto* c_cb = app.add_subcommand("codebook", "Enumerate the codebook of a prefix and word size");
    c_cb->add_option("--prefix", cb.prefix, "Prefix as a 0/1 string")->required();
    c_cb->add_option("--word-size", cb.word_size, "Word size in bits")->required();
    c_cb->add_option("--emit", cb.emit, "Write the codebook to this file");
    c_cb->add_flag("--stats", cb.stats, "Print the cover-time distribution of the codebook");

    PrefixScanArgs ps;
    auto* c_ps = app.add_subcommand("prefix-scan", "Codebook size against prefix choice");
    c_ps->add_option("--word-size", ps.word_size, "Word size in bits")->required();
    c_ps->add_option("--prefix-size", ps.prefix_size, "Rank every prefix of this length");

    PerpetualArgs pp;
    auto* c_pp = app.add_subcommand("perpetual", "Smallest word size for perpetual operation");
    c_pp->add_option("--epsilon", pp.epsilon, "Energy per pulse, J")->capture_default_str();
    c_pp->add_option("--harvest", pp.harvest, "Harvest rate, W")->capture_default_str();
    c_pp->add_option("--rate", pp.rate, "Source rate, bps")->capture_default_str();

    SimArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Run the network simulator");
    c_sim->add_option("--config", sim.config, "JSON config file");
    c_sim->add_option("--seed", sim.seed, "Override seed");
    c_sim->add_option("--congestion", sim.congestion, "Packets created per phase");
    c_sim->add_option("--phases", sim.phases, "Number of phases");
    c_sim->add_option("--rx-policy", sim.rx_policy, "aligned | first-valid");
    c_sim->add_option("--forwarder-as-sender", sim.forwarder_as_sender, "true | false");
    c_sim->add_option("--out", sim.out, "Output directory")->capture_default_str();
    c_sim->add_option("--format", sim.format, "csv | json")->capture_default_str();

    ReproduceArgs rep;
    auto* c_rep = app.add_subcommand("reproduce", "Write the data behind a table or figure");
    c_rep->add_option("target", rep.target, "table1 | fig2 .. fig10")->required();
    c_rep->add_option("--out", rep.out, "Output directory")->capture_default_str();
    c_rep->add_option("--seeds", rep.seeds, "Seeds pooled per congestion level")->delimiter(',')->capture_default_str();
    c_rep->add_option("--phases", rep.phases, "Phases per run")->capture_default_str();
    c_rep->add_option("--jobs", rep.jobs, "Runs executed in parallel")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_cover) return cmd_cover(cover);
        if (*c_cb) return cmd_codebook(cb);
        if (*c_ps) return cmd_prefix_scan(ps);
        if (*c_pp) return cmd_perpetual(pp);
        if (*c_sim) return cmd_simulate(sim);
        if (*c_rep) return cmd_reproduce(rep);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
