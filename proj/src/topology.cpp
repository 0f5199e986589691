#include "bitsurf/topology.hpp"

#include <stdexcept>
#include <string>

namespace bitsurf::netsim {

Topology Topology::build(std::size_t rows, std::size_t cols, double pulse_range, std::size_t id_bits) {
    if (rows == 0 || cols < 2) throw std::invalid_argument("topology needs rows >= 1 and cols >= 2");
    if (id_bits == 0 || id_bits > 15) throw std::invalid_argument("id_bits must be in 1..15");
    if (rows * cols > (std::size_t{1} << id_bits)) {
        throw std::invalid_argument(std::to_string(rows) + "x" + std::to_string(cols) + " grid needs more than " +
                                    std::to_string(id_bits) + "-bit identifiers");
    }
    if (!(pulse_range > 0.0)) throw std::invalid_argument("pulse_range must be > 0");

    Topology t;
    t.rows_ = rows;
    t.cols_ = cols;
    t.id_bits_ = id_bits;
    t.pulse_range_ = pulse_range;
    const std::size_t n = rows * cols;
    t.neighbors_.resize(n);
    t.right_.resize(n);

    // Slack so that sqrt(2) style ranges include the diagonal exactly.
    const double limit_sq = pulse_range * pulse_range * (1.0 + 1e-9);
    for (std::size_t a = 0; a < n; ++a) {
        const GridPos pa = t.position(static_cast<NodeId>(a));
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const GridPos pb = t.position(static_cast<NodeId>(b));
            const double dr = pa.row - pb.row;
            const double dc = pa.col - pb.col;
            if (dr * dr + dc * dc <= limit_sq) {
                t.neighbors_[a].push_back(static_cast<NodeId>(b));
                if (pb.col == pa.col + 1) t.right_[a].push_back(static_cast<NodeId>(b));
            }
        }
        if (pa.col == static_cast<int>(cols)) {
            t.gateways_.push_back(static_cast<NodeId>(a));
        } else {
            t.sources_.push_back(static_cast<NodeId>(a));
        }
    }
    return t;
}

NodeId Topology::id_of(GridPos pos) const {
    if (pos.row < 1 || pos.col < 1 || pos.row > static_cast<int>(rows_) || pos.col > static_cast<int>(cols_)) {
        throw std::out_of_range("grid position outside the topology");
    }
    return static_cast<NodeId>((pos.col - 1) * static_cast<int>(rows_) + (pos.row - 1));
}

GridPos Topology::position(NodeId id) const {
    if (id >= size()) throw std::out_of_range("node id outside the topology");
    return GridPos{static_cast<int>(id % rows_) + 1, static_cast<int>(id / rows_) + 1};
}

bool Topology::is_gateway(NodeId id) const { return position(id).col == static_cast<int>(cols_); }

std::span<const NodeId> Topology::neighbors(NodeId id) const { return neighbors_.at(id); }

std::span<const NodeId> Topology::right_neighbors(NodeId id) const { return right_.at(id); }

std::uint64_t AppPacket::pack(std::size_t id_bits) const {
    const std::uint64_t limit = std::uint64_t{1} << id_bits;
    if (sender >= limit || recipient >= limit || data > 1) {
        throw std::invalid_argument("packet fields do not fit the identifier width");
    }
    return (std::uint64_t{sender} << (id_bits + 1)) | (std::uint64_t{recipient} << 1) | data;
}

AppPacket AppPacket::unpack(std::uint64_t value, std::size_t id_bits) {
    const std::uint64_t id_mask = (std::uint64_t{1} << id_bits) - 1;
    if (value >> (2 * id_bits + 1)) throw std::invalid_argument("packed value wider than the packet layout");
    AppPacket p;
    p.sender = static_cast<NodeId>((value >> (id_bits + 1)) & id_mask);
    p.recipient = static_cast<NodeId>((value >> 1) & id_mask);
    p.data = static_cast<std::uint8_t>(value & 1U);
    return p;
}

} // namespace bitsurf::netsim
