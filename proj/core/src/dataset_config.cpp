#include "sonartex/dataset_config.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <sstream>

#include "sonartex/errors.hpp"
#include "store_util.hpp"

namespace sonartex {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
    throw ValidationError("config key '" + key + "': " + what);
}

double parse_num(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) bad_key(key, "not a number: '" + value + "'");
        return v;
    } catch (const std::logic_error&) {
        bad_key(key, "not a number: '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    const double v = parse_num(key, value);
    const long long i = static_cast<long long>(v);
    if (static_cast<double>(i) != v) bad_key(key, "expected an integer, got '" + value + "'");
    return i;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_num(key, item));
    }
    if (out.empty()) bad_key(key, "expected a comma-separated list of numbers");
    return out;
}

DatasetKind parse_kind(const std::string& value) {
    if (value == "statistical") return DatasetKind::statistical;
    if (value == "structural") return DatasetKind::structural;
    if (value == "mixed") return DatasetKind::mixed;
    bad_key("kind", "expected statistical, structural or mixed, got '" + value + "'");
}

AmplitudeTransition parse_transition(const std::string& value) {
    if (value == "none") return AmplitudeTransition::none;
    if (value == "k_to_rayleigh") return AmplitudeTransition::k_to_rayleigh;
    if (value == "rayleigh_to_k") return AmplitudeTransition::rayleigh_to_k;
    bad_key("transition", "expected none, k_to_rayleigh or rayleigh_to_k, got '" + value + "'");
}

ModulationSpeed parse_speed(const std::string& value) {
    if (value == "slow") return ModulationSpeed::slow;
    if (value == "fast") return ModulationSpeed::fast;
    bad_key("modulation_speed", "expected slow or fast, got '" + value + "'");
}

EnvelopeShape parse_shape(const std::string& value) {
    if (value == "triangular") return EnvelopeShape::triangular;
    if (value == "exp_decay") return EnvelopeShape::exp_decay;
    if (value == "plateau") return EnvelopeShape::plateau;
    if (value == "ramp") return EnvelopeShape::ramp;
    bad_key("envelope", "expected triangular, exp_decay, plateau or ramp, got '" + value + "'");
}

struct RawClass {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
};

void apply_class_key(ClassConfig& cfg, const std::string& key, const std::string& value,
                     const std::function<void(const std::string&)>& warn) {
    const std::string qualified = cfg.class_name + "." + key;
    if (key == "frequencies_hz") {
        cfg.frequencies_hz = parse_list(qualified, value);
    } else if (key == "transition") {
        cfg.amplitude_transition = parse_transition(value);
    } else if (key == "modulation_speed") {
        cfg.modulation_speed = parse_speed(value);
    } else if (key == "modulation_depth") {
        if (!cfg.modulation) cfg.modulation = ModulationPlan{};
        cfg.modulation->depth = parse_num(qualified, value);
    } else if (key == "modulation_rate_hz") {
        if (!cfg.modulation) cfg.modulation = ModulationPlan{};
        cfg.modulation->rate_hz = parse_num(qualified, value);
    } else if (key == "blend_center_s") {
        if (!cfg.blend) cfg.blend = BlendPlan{};
        cfg.blend->center_s = parse_num(qualified, value);
    } else if (key == "blend_width_s") {
        if (!cfg.blend) cfg.blend = BlendPlan{};
        cfg.blend->width_s = parse_num(qualified, value);
    } else if (key == "envelope") {
        cfg.envelope_shape = parse_shape(value);
    } else if (key == "base_hz") {
        cfg.harmonic.base_hz = parse_num(qualified, value);
    } else if (key == "jitter_hz") {
        cfg.harmonic.jitter_hz = parse_num(qualified, value);
    } else if (key == "n_harmonics") {
        cfg.harmonic.n_harmonics = static_cast<int>(parse_int(qualified, value));
    } else if (key == "noise_level") {
        cfg.noise.level = parse_num(qualified, value);
    } else if (key == "impulse_rate_per_s") {
        cfg.noise.impulse_rate_per_s = parse_num(qualified, value);
    } else if (key == "impulse_amp_lo") {
        cfg.noise.impulse_amp_range.first = parse_num(qualified, value);
    } else if (key == "impulse_amp_hi") {
        cfg.noise.impulse_amp_range.second = parse_num(qualified, value);
    } else if (key == "spectral_slope") {
        cfg.noise.spectral_slope = parse_num(qualified, value);
    } else if (key == "rayleigh_sigma") {
        cfg.amplitude_model.rayleigh_sigma = parse_num(qualified, value);
    } else if (key == "k_shape") {
        cfg.amplitude_model.k_shape = parse_num(qualified, value);
    } else if (key == "k_scale") {
        cfg.amplitude_model.k_scale = parse_num(qualified, value);
    } else if (key == "p_rayleigh") {
        cfg.amplitude_model.p_rayleigh = parse_num(qualified, value);
    } else if (key == "envelope_segment_s") {
        cfg.envelope_segment_s = parse_num(qualified, value);
    } else if (key == "ripple_depth") {
        cfg.ripple_depth = parse_num(qualified, value);
    } else if (key == "tone_coherence_s") {
        cfg.tone_coherence_s = parse_num(qualified, value);
    } else if (warn) {
        warn("unknown class key '" + qualified + "' ignored");
    }
}

} // namespace

DatasetSpec parse_config(const std::string& text,
                         const std::function<void(const std::string&)>& warn) {
    std::vector<std::pair<std::string, std::string>> top;
    std::vector<RawClass> raw_classes;
    RawClass* current = nullptr;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unterminated section header");
            const std::string header = trim(line.substr(1, line.size() - 2));
            if (header.rfind("class", 0) != 0)
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": only [class <name>] sections are supported");
            const std::string name = trim(header.substr(5));
            if (name.empty())
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": class section needs a name");
            raw_classes.push_back(RawClass{name, {}});
            current = &raw_classes.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("config line " + std::to_string(line_no) +
                                               ": empty key");
        if (current)
            current->entries.emplace_back(key, value);
        else
            top.emplace_back(key, value);
    }

    if (top.empty() && raw_classes.empty()) {
        if (warn) warn("empty config, using built-in mixed defaults");
        return default_spec(DatasetKind::mixed);
    }

    DatasetKind kind = DatasetKind::mixed;
    for (const auto& [key, value] : top)
        if (key == "kind") kind = parse_kind(value);

    DatasetSpec spec = default_spec(kind);
    for (const auto& [key, value] : top) {
        if (key == "kind") {
            // handled above
        } else if (key == "sample_rate_hz") {
            const long long v = parse_int(key, value);
            if (v <= 0) bad_key(key, "must be positive");
            spec.sample_rate_hz = static_cast<std::uint32_t>(v);
        } else if (key == "duration_s") {
            spec.duration_s = parse_num(key, value);
        } else if (key == "samples_per_class") {
            spec.samples_per_class = static_cast<int>(parse_int(key, value));
        } else if (key == "seed") {
            // full-range u64, not routed through double
            std::uint64_t v = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || ptr != value.data() + value.size())
                bad_key(key, "expected an unsigned integer, got '" + value + "'");
            spec.master_seed = v;
        } else if (warn) {
            warn("unknown key '" + key + "' ignored");
        }
    }

    if (!raw_classes.empty()) {
        // each section starts from the same-position default class of this
        // kind, so partial overrides behave predictably
        const DatasetSpec defaults = default_spec(kind);
        std::vector<ClassConfig> classes;
        for (std::size_t i = 0; i < raw_classes.size(); ++i) {
            ClassConfig cfg = defaults.classes[std::min(i, defaults.classes.size() - 1)];
            cfg.class_name = raw_classes[i].name;
            for (const auto& [key, value] : raw_classes[i].entries)
                apply_class_key(cfg, key, value, warn);
            classes.push_back(std::move(cfg));
        }
        spec.classes = std::move(classes);
    }

    validate(spec);
    return spec;
}

DatasetSpec read_config(const std::filesystem::path& path,
                        const std::function<void(const std::string&)>& warn) {
    return parse_config(detail::read_file(path), warn);
}

std::string format_config(const DatasetSpec& spec) {
    std::ostringstream os;
    os << "kind = " << to_string(spec.kind) << "\n";
    os << "sample_rate_hz = " << spec.sample_rate_hz << "\n";
    os << "duration_s = " << detail::format_double(spec.duration_s) << "\n";
    os << "samples_per_class = " << spec.samples_per_class << "\n";
    os << "seed = " << spec.master_seed << "\n";
    for (const auto& cfg : spec.classes) {
        os << "\n[class " << cfg.class_name << "]\n";
        switch (spec.kind) {
        case DatasetKind::statistical:
        case DatasetKind::mixed:
            os << "frequencies_hz = ";
            for (std::size_t i = 0; i < cfg.frequencies_hz.size(); ++i)
                os << (i ? ", " : "") << detail::format_double(cfg.frequencies_hz[i]);
            os << "\n";
            os << "rayleigh_sigma = " << detail::format_double(cfg.amplitude_model.rayleigh_sigma) << "\n";
            os << "k_shape = " << detail::format_double(cfg.amplitude_model.k_shape) << "\n";
            os << "k_scale = " << detail::format_double(cfg.amplitude_model.k_scale) << "\n";
            os << "p_rayleigh = " << detail::format_double(cfg.amplitude_model.p_rayleigh) << "\n";
            os << "envelope_segment_s = " << detail::format_double(cfg.envelope_segment_s) << "\n";
            if (spec.kind == DatasetKind::statistical) {
                os << "ripple_depth = " << detail::format_double(cfg.ripple_depth) << "\n";
                os << "tone_coherence_s = " << detail::format_double(cfg.tone_coherence_s)
                   << "\n";
            }
            break;
        case DatasetKind::structural:
            os << "base_hz = " << detail::format_double(cfg.harmonic.base_hz) << "\n";
            os << "jitter_hz = " << detail::format_double(cfg.harmonic.jitter_hz) << "\n";
            os << "n_harmonics = " << cfg.harmonic.n_harmonics << "\n";
            os << "envelope = " << to_string(cfg.envelope_shape) << "\n";
            break;
        }
        if (spec.kind == DatasetKind::mixed) {
            os << "transition = " << to_string(cfg.amplitude_transition) << "\n";
            os << "modulation_speed = " << to_string(cfg.modulation_speed) << "\n";
            if (cfg.modulation) {
                os << "modulation_depth = " << detail::format_double(cfg.modulation->depth) << "\n";
                os << "modulation_rate_hz = " << detail::format_double(cfg.modulation->rate_hz) << "\n";
            }
            if (cfg.blend) {
                os << "blend_center_s = " << detail::format_double(cfg.blend->center_s) << "\n";
                os << "blend_width_s = " << detail::format_double(cfg.blend->width_s) << "\n";
            }
        }
        os << "noise_level = " << detail::format_double(cfg.noise.level) << "\n";
        os << "impulse_rate_per_s = " << detail::format_double(cfg.noise.impulse_rate_per_s) << "\n";
        os << "impulse_amp_lo = " << detail::format_double(cfg.noise.impulse_amp_range.first) << "\n";
        os << "impulse_amp_hi = " << detail::format_double(cfg.noise.impulse_amp_range.second) << "\n";
        os << "spectral_slope = " << detail::format_double(cfg.noise.spectral_slope) << "\n";
    }
    return os.str();
}

} // namespace sonartex
