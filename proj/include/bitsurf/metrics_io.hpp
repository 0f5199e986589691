#pragma once

#include "bitsurf/netsim.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bitsurf::netsim {

/// One summary line per congestion level. Latencies are in symbol ticks.
///
/// CSV columns, in order:
///   congestion,runs,created,delivered,lost_busy,lost_timeout,lost_rxmiss,
///   lost_misdecode,lost_deadend,delivery_rate,pulses,mean_tx_cover,
///   p50_tx_cover,p80_tx_cover,p95_tx_cover,mean_queue_delay,max_rx_busy
struct SummaryRow {
    std::uint64_t congestion = 0;
    std::uint64_t runs = 0;
    std::uint64_t created = 0;
    std::uint64_t delivered = 0;
    std::uint64_t lost_busy = 0;
    std::uint64_t lost_timeout = 0;
    std::uint64_t lost_rxmiss = 0;
    std::uint64_t lost_misdecode = 0;
    std::uint64_t lost_deadend = 0;
    double delivery_rate = 0;
    std::uint64_t pulses = 0;
    double mean_tx_cover = 0;
    double p50_tx_cover = 0;
    double p80_tx_cover = 0;
    double p95_tx_cover = 0;
    double mean_queue_delay = 0;
    std::uint64_t max_rx_busy = 0;

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

SummaryRow summarize(std::uint64_t congestion, std::uint64_t runs, const Metrics& m);

extern const char* const kSummaryCsvHeader;

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);
std::string summary_json(std::span<const SummaryRow> rows);

/// One value per line.
void write_samples(const std::filesystem::path& path, std::span<const std::uint64_t> samples);
std::vector<std::uint64_t> read_samples(const std::filesystem::path& path);

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(const std::string& text);

/// Writes into `dir` (created if missing):
///   summary.csv or summary.json  rows for runs that created packets
///   tx_cover.txt                 one line per emitted pulse
///   queue_delay.txt              one line per finished Tx wait
///   rx_busy.txt                  one line per handled pulse
void export_metrics(const std::vector<SummaryRow>& rows, const Metrics& pooled, const std::filesystem::path& dir,
                    OutputFormat format);

} // namespace bitsurf::netsim
