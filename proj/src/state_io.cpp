#include "qsle/state_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace qsle {

using nlohmann::json;

PureState parse_state_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("state file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("state file: top-level value must be an object");

    if (!doc.contains("dims")) throw ValidationError("state file: missing field \"dims\"");
    const json& jdims = doc["dims"];
    if (!jdims.is_array() || jdims.empty())
        throw ValidationError("state file: \"dims\" must be a non-empty array of integers");
    std::vector<std::size_t> dims;
    dims.reserve(jdims.size());
    std::size_t total = 1;
    for (const json& d : jdims) {
        if (!d.is_number_integer() || d.get<long long>() < 2)
            throw ValidationError(
                "state file: \"dims\" entries must be integers >= 2 (subsystems of dimension 1 "
                "are rejected)");
        dims.push_back(d.get<std::size_t>());
        total *= dims.back();
    }

    if (!doc.contains("amplitudes"))
        throw ValidationError("state file: missing field \"amplitudes\"");
    const json& jamps = doc["amplitudes"];
    if (!jamps.is_array())
        throw ValidationError("state file: \"amplitudes\" must be an array of [re, im] pairs");
    if (jamps.size() != total)
        throw ValidationError("state file: \"amplitudes\" has " + std::to_string(jamps.size()) +
                              " entries, expected " + std::to_string(total) +
                              " for the given dims");
    std::vector<cplx> amps;
    amps.reserve(total);
    for (const json& a : jamps) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
            throw ValidationError(
                "state file: \"amplitudes\" entries must be [re, im] number pairs");
        amps.emplace_back(a[0].get<double>(), a[1].get<double>());
    }

    if (vector_norm(amps) < kNormTol)
        throw ValidationError("state file: \"amplitudes\" has zero norm");
    return PureState::normalized(std::move(amps), std::move(dims));
}

PureState load_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open state file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_state_json(buf.str());
}

std::string state_to_json(const PureState& state) {
    json doc;
    doc["dims"] = state.dims();
    json amps = json::array();
    for (const cplx& a : state.amplitudes()) amps.push_back({a.real(), a.imag()});
    doc["amplitudes"] = std::move(amps);
    return doc.dump();
}

void save_state(const PureState& state, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write state file: " + path);
    out << state_to_json(state) << '\n';
}

} // namespace qsle
