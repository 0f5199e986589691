#include "bitsurf/netsim.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bitsurf::netsim {

using nlohmann::json;

std::string to_string(adapter::RxPolicy policy) {
    return policy == adapter::RxPolicy::Aligned ? "aligned" : "first-valid";
}

adapter::RxPolicy parse_rx_policy(const std::string& text) {
    if (text == "aligned") return adapter::RxPolicy::Aligned;
    if (text == "first-valid") return adapter::RxPolicy::FirstValid;
    throw std::invalid_argument("rx_policy must be \"aligned\" or \"first-valid\", got \"" + text + "\"");
}

void SimConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& what) {
        throw std::invalid_argument("config key '" + key + "': " + what);
    };
    if (phases == 0) fail("phases", "must be positive");
    if (!(rate_bps > 0) || !std::isfinite(rate_bps)) fail("rate_bps", "must be a positive number");
    if (rows == 0) fail("rows", "must be positive");
    if (cols < 2) fail("cols", "must be at least 2");
    if (id_bits == 0 || id_bits > 15) fail("id_bits", "must be in 1..15");
    if (rows * cols > (std::size_t{1} << id_bits)) fail("id_bits", "too narrow for rows*cols nodes");
    if (!(pulse_range > 0) || !std::isfinite(pulse_range)) fail("pulse_range", "must be a positive number");
    try {
        Word::parse(prefix);
    } catch (const std::exception& e) {
        fail("prefix", e.what());
    }
    if (prefix.empty()) fail("prefix", "must be non-empty");
    if (word_size <= prefix.size()) fail("word_size", "must exceed the prefix length");
    if (word_size > kMaxEnumeratedWordSize) fail("word_size", "at most " + std::to_string(kMaxEnumeratedWordSize));
    if (word_size - prefix.size() > kMaxEnumeratedSuffixBits) {
        fail("word_size", "suffix longer than " + std::to_string(kMaxEnumeratedSuffixBits) + " bits");
    }
    if (buffer_bits < word_size) fail("buffer_bits", "must be at least word_size");
    if (timeout_bits == 0) fail("timeout_bits", "must be positive");
    if (!(epsilon_joules > 0)) fail("epsilon_joules", "must be positive");
    if (!(harvest_watts > 0)) fail("harvest_watts", "must be positive");
    if (!(initial_energy_joules >= 0)) fail("initial_energy_joules", "must be non-negative");
    if (phase_tick_limit == 0) fail("phase_tick_limit", "must be positive");
}

namespace {

template <typename T>
void read_key(const json& j, const std::string& key, T& out) {
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
}

template <typename T>
void read_unsigned(const json& j, const std::string& key, T& out) {
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) throw std::invalid_argument("config key '" + key + "': expected a non-negative integer");
    read_key(j, key, out);
}

void read_number(const json& j, const std::string& key, double& out) {
    if (!j.at(key).is_number()) throw std::invalid_argument("config key '" + key + "': expected a number");
    read_key(j, key, out);
}

} // namespace

SimConfig parse_sim_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    SimConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "seed") read_unsigned(j, key, c.seed);
        else if (key == "congestion") read_unsigned(j, key, c.congestion);
        else if (key == "phases") read_unsigned(j, key, c.phases);
        else if (key == "rate_bps") read_number(j, key, c.rate_bps);
        else if (key == "rows") read_unsigned(j, key, c.rows);
        else if (key == "cols") read_unsigned(j, key, c.cols);
        else if (key == "pulse_range") read_number(j, key, c.pulse_range);
        else if (key == "id_bits") read_unsigned(j, key, c.id_bits);
        else if (key == "prefix") {
            if (!value.is_string()) throw std::invalid_argument("config key 'prefix': expected a bit string");
            c.prefix = value.get<std::string>();
        } else if (key == "word_size") read_unsigned(j, key, c.word_size);
        else if (key == "buffer_bits") read_unsigned(j, key, c.buffer_bits);
        else if (key == "timeout_bits") read_unsigned(j, key, c.timeout_bits);
        else if (key == "rx_policy") {
            if (!value.is_string()) throw std::invalid_argument("config key 'rx_policy': expected a string");
            c.rx_policy = parse_rx_policy(value.get<std::string>());
        } else if (key == "epsilon_joules") read_number(j, key, c.epsilon_joules);
        else if (key == "harvest_watts") read_number(j, key, c.harvest_watts);
        else if (key == "initial_energy_joules") read_number(j, key, c.initial_energy_joules);
        else if (key == "forwarder_as_sender") {
            if (!value.is_boolean()) throw std::invalid_argument("config key 'forwarder_as_sender': expected true or false");
            c.forwarder_as_sender = value.get<bool>();
        } else if (key == "phase_tick_limit") read_unsigned(j, key, c.phase_tick_limit);
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sim_config(ss.str());
}

std::string sim_config_to_json(const SimConfig& c) {
    json j = {
        {"seed", c.seed},
        {"congestion", c.congestion},
        {"phases", c.phases},
        {"rate_bps", c.rate_bps},
        {"rows", c.rows},
        {"cols", c.cols},
        {"pulse_range", c.pulse_range},
        {"id_bits", c.id_bits},
        {"prefix", c.prefix},
        {"word_size", c.word_size},
        {"buffer_bits", c.buffer_bits},
        {"timeout_bits", c.timeout_bits},
        {"rx_policy", to_string(c.rx_policy)},
        {"forwarder_as_sender", c.forwarder_as_sender},
        {"epsilon_joules", c.epsilon_joules},
        {"harvest_watts", c.harvest_watts},
        {"initial_energy_joules", c.initial_energy_joules},
        {"phase_tick_limit", c.phase_tick_limit},
    };
    return j.dump(2);
}

} // namespace bitsurf::netsim
