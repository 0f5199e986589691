#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bitsurf::netsim {

using NodeId = std::uint16_t;

/// 1-based grid coordinates.
struct GridPos {
    int row;
    int col;
    friend bool operator==(const GridPos&, const GridPos&) = default;
};

inline const double kDefaultPulseRange = std::sqrt(2.0);

/// Rectangular grid of nodes. Ids run column-major, (row, col) ->
/// (col-1)*rows + (row-1), so every id fits in `id_bits` bits. The last
/// column holds the gateways. Two nodes hear each other's pulses when their
/// Euclidean grid distance is at most `pulse_range`.
class Topology {
public:
    static Topology build(std::size_t rows, std::size_t cols, double pulse_range = kDefaultPulseRange,
                          std::size_t id_bits = 5);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return rows_ * cols_; }
    std::size_t id_bits() const noexcept { return id_bits_; }
    double pulse_range() const noexcept { return pulse_range_; }

    NodeId id_of(GridPos pos) const;
    GridPos position(NodeId id) const;
    bool is_gateway(NodeId id) const;

    /// Every node within pulse range, ascending ids.
    std::span<const NodeId> neighbors(NodeId id) const;
    /// Neighbours in the next column, ascending ids.
    std::span<const NodeId> right_neighbors(NodeId id) const;

    std::span<const NodeId> gateways() const noexcept { return gateways_; }
    /// Nodes that may create packets (all non-gateways).
    std::span<const NodeId> sources() const noexcept { return sources_; }

private:
    Topology() = default;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t id_bits_ = 0;
    double pulse_range_ = 0;
    std::vector<std::vector<NodeId>> neighbors_;
    std::vector<std::vector<NodeId>> right_;
    std::vector<NodeId> gateways_;
    std::vector<NodeId> sources_;
};

inline Topology build_topology(std::size_t rows, std::size_t cols, double pulse_range = kDefaultPulseRange,
                               std::size_t id_bits = 5) {
    return Topology::build(rows, cols, pulse_range, id_bits);
}

/// Application payload: sender id, immediate recipient id and one data bit.
struct AppPacket {
    NodeId sender = 0;
    NodeId recipient = 0;
    std::uint8_t data = 0;

    /// sender | recipient | data, most significant first: 2*id_bits + 1 bits.
    std::uint64_t pack(std::size_t id_bits) const;
    static AppPacket unpack(std::uint64_t value, std::size_t id_bits);

    friend bool operator==(const AppPacket&, const AppPacket&) = default;
};

} // namespace bitsurf::netsim
