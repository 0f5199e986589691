#include "bitsurf/metrics_io.hpp"

#include "bitsurf/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bitsurf::netsim {

const char* const kSummaryCsvHeader =
    "congestion,runs,created,delivered,lost_busy,lost_timeout,lost_rxmiss,lost_misdecode,lost_deadend,"
    "delivery_rate,pulses,mean_tx_cover,p50_tx_cover,p80_tx_cover,p95_tx_cover,mean_queue_delay,max_rx_busy";

namespace {

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename T>
T parse_field(const std::string& text, const char* column) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument(std::string("summary CSV: bad value '") + text + "' in column " + column);
    }
    return value;
}

} // namespace

SummaryRow summarize(std::uint64_t congestion, std::uint64_t runs, const Metrics& m) {
    SummaryRow r;
    r.congestion = congestion;
    r.runs = runs;
    r.created = m.created;
    r.delivered = m.delivered;
    r.lost_busy = m.lost_busy;
    r.lost_timeout = m.lost_timeout;
    r.lost_rxmiss = m.lost_rxmiss;
    r.lost_misdecode = m.lost_misdecode;
    r.lost_deadend = m.lost_deadend;
    r.delivery_rate = m.delivery_rate();
    r.pulses = m.tx_cover_times.size();
    if (!m.tx_cover_times.empty()) {
        const auto sorted = stats::sorted_copy(std::span<const std::uint64_t>(m.tx_cover_times));
        r.mean_tx_cover = stats::mean(std::span<const double>(sorted));
        r.p50_tx_cover = stats::quantile_sorted(sorted, 0.50);
        r.p80_tx_cover = stats::quantile_sorted(sorted, 0.80);
        r.p95_tx_cover = stats::quantile_sorted(sorted, 0.95);
    }
    if (!m.queue_delays.empty()) r.mean_queue_delay = stats::mean(std::span<const std::uint64_t>(m.queue_delays));
    if (!m.rx_busy_times.empty()) r.max_rx_busy = *std::max_element(m.rx_busy_times.begin(), m.rx_busy_times.end());
    return r;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << kSummaryCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.congestion << ',' << r.runs << ',' << r.created << ',' << r.delivered << ',' << r.lost_busy << ','
            << r.lost_timeout << ',' << r.lost_rxmiss << ',' << r.lost_misdecode << ',' << r.lost_deadend << ','
            << fmt_double(r.delivery_rate) << ',' << r.pulses << ',' << fmt_double(r.mean_tx_cover) << ','
            << fmt_double(r.p50_tx_cover) << ',' << fmt_double(r.p80_tx_cover) << ',' << fmt_double(r.p95_tx_cover)
            << ',' << fmt_double(r.mean_queue_delay) << ',' << r.max_rx_busy << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSummaryCsvHeader) {
        throw std::invalid_argument("summary CSV: missing or unexpected header");
    }
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 17) throw std::invalid_argument("summary CSV: expected 17 columns, got " + std::to_string(f.size()));
        SummaryRow r;
        r.congestion = parse_field<std::uint64_t>(f[0], "congestion");
        r.runs = parse_field<std::uint64_t>(f[1], "runs");
        r.created = parse_field<std::uint64_t>(f[2], "created");
        r.delivered = parse_field<std::uint64_t>(f[3], "delivered");
        r.lost_busy = parse_field<std::uint64_t>(f[4], "lost_busy");
        r.lost_timeout = parse_field<std::uint64_t>(f[5], "lost_timeout");
        r.lost_rxmiss = parse_field<std::uint64_t>(f[6], "lost_rxmiss");
        r.lost_misdecode = parse_field<std::uint64_t>(f[7], "lost_misdecode");
        r.lost_deadend = parse_field<std::uint64_t>(f[8], "lost_deadend");
        r.delivery_rate = parse_field<double>(f[9], "delivery_rate");
        r.pulses = parse_field<std::uint64_t>(f[10], "pulses");
        r.mean_tx_cover = parse_field<double>(f[11], "mean_tx_cover");
        r.p50_tx_cover = parse_field<double>(f[12], "p50_tx_cover");
        r.p80_tx_cover = parse_field<double>(f[13], "p80_tx_cover");
        r.p95_tx_cover = parse_field<double>(f[14], "p95_tx_cover");
        r.mean_queue_delay = parse_field<double>(f[15], "mean_queue_delay");
        r.max_rx_busy = parse_field<std::uint64_t>(f[16], "max_rx_busy");
        rows.push_back(r);
    }
    return rows;
}

std::string summary_json(std::span<const SummaryRow> rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"congestion", r.congestion},
                       {"runs", r.runs},
                       {"created", r.created},
                       {"delivered", r.delivered},
                       {"lost_busy", r.lost_busy},
                       {"lost_timeout", r.lost_timeout},
                       {"lost_rxmiss", r.lost_rxmiss},
                       {"lost_misdecode", r.lost_misdecode},
                       {"lost_deadend", r.lost_deadend},
                       {"delivery_rate", r.delivery_rate},
                       {"pulses", r.pulses},
                       {"mean_tx_cover", r.mean_tx_cover},
                       {"p50_tx_cover", r.p50_tx_cover},
                       {"p80_tx_cover", r.p80_tx_cover},
                       {"p95_tx_cover", r.p95_tx_cover},
                       {"mean_queue_delay", r.mean_queue_delay},
                       {"max_rx_busy", r.max_rx_busy}});
    }
    return nlohmann::json{{"rows", arr}}.dump(2) + "\n";
}

void write_samples(const std::filesystem::path& path, std::span<const std::uint64_t> samples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (auto v : samples) out << v << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::uint64_t> read_samples(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::uint64_t> out;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(parse_field<std::uint64_t>(line, path.filename().c_str()));
    }
    return out;
}

OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw std::invalid_argument("format must be csv or json, got '" + text + "'");
}

void export_metrics(const std::vector<SummaryRow>& rows, const Metrics& pooled, const std::filesystem::path& dir,
                    OutputFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    std::vector<SummaryRow> kept;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(kept), [](const SummaryRow& r) { return r.created > 0; });

    const auto summary = dir / (format == OutputFormat::Csv ? "summary.csv" : "summary.json");
    std::ofstream out(summary);
    if (!out) throw std::runtime_error("cannot write " + summary.string());
    if (format == OutputFormat::Csv) {
        write_summary_csv(out, kept);
    } else {
        out << summary_json(kept);
    }
    if (!out) throw std::runtime_error("write failed: " + summary.string());

    write_samples(dir / "tx_cover.txt", pooled.tx_cover_times);
    write_samples(dir / "queue_delay.txt", pooled.queue_delays);
    write_samples(dir / "rx_busy.txt", pooled.rx_busy_times);
}

} // namespace bitsurf::netsim
