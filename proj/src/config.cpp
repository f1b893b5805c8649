#include "mlsal/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mlsal {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw Error("config: invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value);
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    // std::from_chars for double is unavailable in older libstdc++ releases.
    std::string copy(value);
    std::istringstream in(copy);
    in.imbue(std::locale::classic());
    double out = 0.0;
    in >> out;
    if (in.fail() || !in.eof()) bad_value(key, value);
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value);
}

std::vector<int> parse_scales(std::string_view key, std::string_view value) {
    std::vector<int> out;
    while (!value.empty()) {
        const auto comma = value.find(',');
        out.push_back(parse_number<int>(key, trim(value.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    if (out.empty()) bad_value(key, value);
    return out;
}

std::string format_double(double v) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::setprecision(17) << v;
    return out.str();
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "sigma1", "sigma2", "eta", "scales", "corner_fraction", "h_count", "beta", "guided_radius",
        "guided_eps", "f_mode", "squared_distance", "literal_log_sign", "beta2", "seed", "compactness",
        "slic_iterations"};
    return keys;
}

void set_config_value(PipelineConfig& c, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "sigma1") c.sigma1 = parse_double(key, value);
    else if (key == "sigma2") c.sigma2 = parse_double(key, value);
    else if (key == "eta") c.eta = parse_double(key, value);
    else if (key == "scales") c.scales = parse_scales(key, value);
    else if (key == "corner_fraction") c.corner_fraction = parse_double(key, value);
    else if (key == "h_count") c.h_count = parse_number<int>(key, value);
    else if (key == "beta") c.beta = parse_double(key, value);
    else if (key == "guided_radius") c.guided_radius = parse_number<int>(key, value);
    else if (key == "guided_eps") c.guided_eps = parse_double(key, value);
    else if (key == "f_mode") {
        if (value == "const") c.f_mode = RegionPriorMode::Constant;
        else if (value == "luma") c.f_mode = RegionPriorMode::Luma;
        else bad_value(key, value);
    }
    else if (key == "squared_distance") c.squared_distance = parse_bool(key, value);
    else if (key == "literal_log_sign") c.literal_log_sign = parse_bool(key, value);
    else if (key == "beta2") c.beta2 = parse_double(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "compactness") c.compactness = parse_double(key, value);
    else if (key == "slic_iterations") c.slic_iterations = parse_number<int>(key, value);
    else throw Error("config: unknown key '" + std::string(key) + "'");
}

void validate(const PipelineConfig& c) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(std::string("config: ") + what);
    };
    require(c.sigma1 > 0.0, "sigma1 must be > 0");
    require(c.sigma2 > 0.0, "sigma2 must be > 0");
    require(c.eta > 0.0, "eta must be > 0");
    require(!c.scales.empty(), "scales must be nonempty");
    require(std::is_sorted(c.scales.begin(), c.scales.end()) &&
                std::adjacent_find(c.scales.begin(), c.scales.end()) == c.scales.end(),
            "scales must be strictly ascending");
    require(c.corner_fraction > 0.0 && c.corner_fraction < 0.5, "corner_fraction must lie in (0, 0.5)");
    require(c.h_count >= 1, "h_count must be >= 1");
    require(c.beta > 0.0, "beta must be > 0");
    require(c.guided_radius >= 0, "guided_radius must be >= 0");
    require(c.guided_eps > 0.0, "guided_eps must be > 0");
    require(c.beta2 > 0.0, "beta2 must be > 0");
    require(c.compactness > 0.0, "compactness must be > 0");
    require(c.slic_iterations >= 1, "slic_iterations must be >= 1");
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig config;
    int line_no = 0;
    while (!text.empty()) {
        const auto newline = text.find('\n');
        std::string_view line = text.substr(0, newline);
        text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error("config: line " + std::to_string(line_no) + " is not 'key = value'");
        }
        set_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    validate(config);
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("config: cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const PipelineConfig& c) {
    std::ostringstream out;
    out << "sigma1 = " << format_double(c.sigma1) << '\n';
    out << "sigma2 = " << format_double(c.sigma2) << '\n';
    out << "eta = " << format_double(c.eta) << '\n';
    out << "scales = ";
    for (std::size_t i = 0; i < c.scales.size(); ++i) out << (i ? "," : "") << c.scales[i];
    out << '\n';
    out << "corner_fraction = " << format_double(c.corner_fraction) << '\n';
    out << "h_count = " << c.h_count << '\n';
    out << "beta = " << format_double(c.beta) << '\n';
    out << "guided_radius = " << c.guided_radius << '\n';
    out << "guided_eps = " << format_double(c.guided_eps) << '\n';
    out << "f_mode = " << (c.f_mode == RegionPriorMode::Luma ? "luma" : "const") << '\n';
    out << "squared_distance = " << (c.squared_distance ? "true" : "false") << '\n';
    out << "literal_log_sign = " << (c.literal_log_sign ? "true" : "false") << '\n';
    out << "beta2 = " << format_double(c.beta2) << '\n';
    out << "seed = " << c.seed << '\n';
    out << "compactness = " << format_double(c.compactness) << '\n';
    out << "slic_iterations = " << c.slic_iterations << '\n';
    return out.str();
}

}  // namespace mlsal
