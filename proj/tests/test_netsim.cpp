#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bitsurf/netsim.hpp"
#include "network_app.hpp"

#include <algorithm>

using namespace bitsurf;
using namespace bitsurf::netsim;

namespace {

// 2x3 grid with 11-bit words: small enough for the symbol-by-symbol engine.
SimConfig small_config(std::uint64_t seed) {
    SimConfig c;
    c.rows = 2;
    c.cols = 3;
    c.id_bits = 3;
    c.prefix = "100";
    c.word_size = 11;
    c.buffer_bits = 18;
    c.timeout_bits = 3000;
    c.phases = 6;
    c.congestion = 5;
    c.seed = seed;
    return c;
}

std::vector<GridPos> positions(const Topology& t, std::span<const NodeId> ids) {
    std::vector<GridPos> out;
    for (auto id : ids) out.push_back(t.position(id));
    return out;
}

} // namespace

TEST_CASE("default topology") {
    const auto t = build_topology(4, 8);
    CHECK(t.size() == 32);
    CHECK(t.gateways().size() == 4);
    CHECK(t.sources().size() == 28);
    CHECK(positions(t, t.right_neighbors(t.id_of({2, 4}))) == std::vector<GridPos>{{1, 5}, {2, 5}, {3, 5}});
    CHECK(positions(t, t.right_neighbors(t.id_of({1, 1}))) == std::vector<GridPos>{{1, 2}, {2, 2}});
    for (auto g : t.gateways()) {
        CHECK(t.right_neighbors(g).empty());
        CHECK(t.position(g).col == 8);
    }
    for (NodeId a = 0; a < t.size(); ++a) {
        const GridPos pa = t.position(a);
        CHECK(t.id_of(pa) == a);
        CHECK(a < 32);
        for (NodeId b = 0; b < t.size(); ++b) {
            const GridPos pb = t.position(b);
            const bool expect = a != b && std::abs(pa.row - pb.row) <= 1 && std::abs(pa.col - pb.col) <= 1;
            const auto nb = t.neighbors(a);
            REQUIRE((std::find(nb.begin(), nb.end(), b) != nb.end()) == expect);
        }
    }
}

TEST_CASE("topology limits") {
    CHECK_THROWS(build_topology(4, 9));
    CHECK_NOTHROW(build_topology(4, 9, kDefaultPulseRange, 6));
    CHECK_THROWS(build_topology(4, 1));
    CHECK_THROWS(build_topology(4, 8, 0.0));
    CHECK(build_topology(4, 8, 1.0).neighbors(0).size() == 2);
}

TEST_CASE("application packets pack into 11 bits") {
    const AppPacket p{21, 30, 1};
    const auto v = p.pack(5);
    CHECK(v == ((21u << 6) | (30u << 1) | 1u));
    CHECK(v < 2048);
    CHECK(AppPacket::unpack(v, 5) == p);
    CHECK_THROWS(AppPacket{32, 0, 0}.pack(5));
    CHECK_THROWS(AppPacket{0, 0, 2}.pack(5));
    CHECK_THROWS(AppPacket::unpack(2048, 5));
}

TEST_CASE("application layer routing") {
    for (bool forwarder : {false, true}) {
        SimConfig c;
        c.forwarder_as_sender = forwarder;
        const auto topo = Topology::build(c.rows, c.cols, c.pulse_range, c.id_bits);
        const auto cb = make_codebook(c, topo);
        NetworkApp app(c, topo, cb);
        app.begin_phase();
        const auto sends = app.create_packets(1);
        REQUIRE(sends.size() == 1);
        const auto& s = sends.front();
        const auto first = AppPacket::unpack(*cb->index_of(s.word), c.id_bits);
        CHECK(first.sender == s.node);

        const Pulse pulse = app.pulse_for(s.packet);
        CHECK(pulse.recipient == first.recipient);

        // A bystander decoding the word ignores it.
        NodeId bystander = 0;
        while (bystander == pulse.recipient) ++bystander;
        CHECK_FALSE(app.on_deliver(bystander, pulse.word, pulse).has_value());
        CHECK(app.live_packets() == 1);

        const auto fwd = app.on_deliver(pulse.recipient, pulse.word, pulse);
        if (topo.is_gateway(pulse.recipient)) {
            CHECK_FALSE(fwd.has_value());
            CHECK(app.metrics().delivered == 1);
            continue;
        }
        REQUIRE(fwd.has_value());
        const auto next = AppPacket::unpack(*cb->index_of(fwd->word), c.id_bits);
        CHECK(next.sender == (forwarder ? pulse.recipient : first.sender));
        CHECK(next.data == first.data);
        const auto right = topo.right_neighbors(pulse.recipient);
        CHECK(std::find(right.begin(), right.end(), next.recipient) != right.end());
    }
}

TEST_CASE("gateway consumes and misdecoded words are lost") {
    SimConfig c;
    const auto topo = Topology::build(c.rows, c.cols, c.pulse_range, c.id_bits);
    const auto cb = make_codebook(c, topo);
    NetworkApp app(c, topo, cb);
    app.begin_phase();
    const auto sends = app.create_packets(2);
    const Pulse p0 = app.pulse_for(sends[0].packet);
    const Pulse p1 = app.pulse_for(sends[1].packet);
    Word other = cb->word_at(0) == p0.word ? cb->word_at(1) : cb->word_at(0);
    CHECK_FALSE(app.on_deliver(p0.recipient, other, p0).has_value());
    CHECK(app.metrics().lost_misdecode == 1);
    app.on_busy(p1.recipient, p1);
    CHECK(app.metrics().lost_busy == 1);
    CHECK(app.live_packets() == 0);
}

TEST_CASE("codebook must cover every packet") {
    SimConfig c;
    c.prefix = "1000";
    c.word_size = 14;
    const auto topo = Topology::build(c.rows, c.cols, c.pulse_range, c.id_bits);
    CHECK_THROWS_AS(make_codebook(c, topo), std::invalid_argument);
}

TEST_CASE("single packet per phase is always delivered") {
    SimConfig c;
    c.seed = 7;
    const auto m = run_simulation(c);
    CHECK(m.created == 100);
    CHECK(m.delivered == 100);
    CHECK(m.conserved());
    CHECK(m.phases == 100);
}

TEST_CASE("zero packets per phase completes with no samples") {
    SimConfig c;
    c.congestion = 0;
    const auto m = run_simulation(c);
    CHECK(m.created == 0);
    CHECK(m.tx_cover_times.empty());
    CHECK(m.rx_busy_times.empty());
    CHECK(m.delivery_rate() == 1.0);
}

TEST_CASE("congestion 20 delivery stays in band") {
    SimConfig c;
    c.congestion = 20;
    const auto m = run_simulation(c);
    CHECK(m.delivery_rate() >= 0.99);
    CHECK(m.conserved());
}

TEST_CASE("identical configs give identical metrics") {
    SimConfig c;
    c.congestion = 10;
    c.phases = 20;
    CHECK(run_simulation(c) == run_simulation(c));
    SimConfig d = c;
    d.seed = 2;
    CHECK_FALSE(run_simulation(c) == run_simulation(d));
}

TEST_CASE("event engine matches the symbol-by-symbol reference") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        for (auto policy : {adapter::RxPolicy::Aligned, adapter::RxPolicy::FirstValid}) {
            for (bool forwarder : {true, false}) {
                auto c = small_config(seed);
                c.rx_policy = policy;
                c.forwarder_as_sender = forwarder;
                const auto fast = run_simulation(c);
                const auto ref = run_reference_simulation(c);
                INFO("seed " << seed << " policy " << to_string(policy) << " forwarder " << forwarder);
                CHECK(fast.created == 30);
                CHECK(fast == ref);
                CHECK(fast.conserved());
            }
        }
    }
}

TEST_CASE("event engine matches the reference under timeouts") {
    auto c = small_config(9);
    c.timeout_bits = 1500;
    c.congestion = 8;
    const auto fast = run_simulation(c);
    CHECK(fast.lost_timeout > 0);
    CHECK(fast == run_reference_simulation(c));
}

TEST_CASE("every loss category is reachable and conservation holds") {
    auto c = small_config(3);
    c.rx_policy = adapter::RxPolicy::FirstValid;
    c.forwarder_as_sender = false;
    c.congestion = 12;
    c.phases = 20;
    const auto m = run_simulation(c);
    CHECK(m.conserved());
    CHECK(m.lost_misdecode + m.lost_busy > 0);
    CHECK(m.created == m.delivered + m.lost_busy + m.lost_timeout + m.lost_rxmiss + m.lost_misdecode + m.lost_deadend);
}

TEST_CASE("delivered paths advance one column per hop and rx busy stays bounded") {
    SimConfig c;
    c.congestion = 40;
    c.phases = 20;
    Engine engine(c);
    for (std::size_t p = 0; p < c.phases; ++p) {
        const auto r = engine.run_phase(c.congestion);
        CHECK(r.created == 40);
        CHECK(r.delivered + r.lost == 40);
        CHECK(r.end_tick >= r.start_tick);
    }
    const auto m = engine.finish();
    const auto& topo = engine.topology();
    for (const auto& path : m.delivered_paths) {
        REQUIRE(topo.is_gateway(path.back()));
        for (std::size_t i = 1; i < path.size(); ++i) {
            REQUIRE(topo.position(path[i]).col == topo.position(path[i - 1]).col + 1);
        }
    }
    for (auto b : m.rx_busy_times) REQUIRE(b <= c.buffer_bits + c.word_size);
    for (auto d : engine.node_delays()) REQUIRE(d <= c.buffer_bits - c.word_size);
}

TEST_CASE("nodes pulse no faster than the perpetual interval") {
    SimConfig c;
    c.congestion = 100;
    c.phases = 30;
    const auto m = run_simulation(c);
    REQUIRE(m.energy.size() == 32);
    int checked = 0;
    for (const auto& e : m.energy) {
        if (e.pulses < 100) continue;
        ++checked;
        CHECK(e.mean_pulse_interval >= 0.9 * 65536 / c.rate_bps);
    }
    CHECK(checked > 0);
}

TEST_CASE("phase guard aborts a runaway phase") {
    SimConfig c;
    c.phase_tick_limit = 1000;
    CHECK_THROWS_AS(run_simulation(c), std::runtime_error);
}
