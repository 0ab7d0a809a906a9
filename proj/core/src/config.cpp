#include "goatforge/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace goatforge {

std::vector<WeightedKey> weighted_keys(const CompositionWeights& w) {
    return {
        {{TaskKind::Copying, false}, w.copying},
        {{TaskKind::Split, false}, w.split},
        {{TaskKind::Comparison, false}, w.comparison},
        {{TaskKind::Ordering, false}, w.ordering},
        {{TaskKind::Addition, false}, w.addition},
        {{TaskKind::Subtraction, false}, w.subtraction},
        {{TaskKind::MulN1, false}, w.mul_n1},
        {{TaskKind::DivN1, false}, w.div_n1},
        {{TaskKind::MulNM, false}, w.mul_nm},
        {{TaskKind::DivNM, false}, w.div_nm},
        {{TaskKind::MulNM, true}, w.mul_nm_special},
        {{TaskKind::DivNM, true}, w.div_nm_special},
    };
}

namespace {

std::uint64_t parse_u64(const std::string& value) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw std::runtime_error("expected an unsigned integer, got '" + value + "'");
    return out;
}

double parse_double(const std::string& value) {
    try {
        std::size_t consumed = 0;
        double out = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::runtime_error("");
        return out;
    } catch (...) {
        throw std::runtime_error("expected a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw std::runtime_error("expected a boolean, got '" + value + "'");
}

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Field {
    const char* key;
    std::function<void(Config&, const std::string&)> set;
    std::function<std::string(const Config&)> get;
};

std::string fmt_double(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

const std::vector<Field>& fields() {
    static const std::vector<Field> kFields = [] {
        std::vector<Field> f;
        auto add_u64 = [&](const char* key, std::uint64_t Config::* member) {
            f.push_back({key,
                         [member](Config& c, const std::string& v) { c.*member = parse_u64(v); },
                         [member](const Config& c) { return std::to_string(c.*member); }});
        };
        auto add_size = [&](const char* key, std::size_t Settings::* member) {
            f.push_back({key,
                         [member](Config& c, const std::string& v) {
                             c.settings.*member = static_cast<std::size_t>(parse_u64(v));
                         },
                         [member](const Config& c) { return std::to_string(c.settings.*member); }});
        };
        auto add_weight = [&](const char* key, double CompositionWeights::* member) {
            f.push_back({key,
                         [member](Config& c, const std::string& v) {
                             c.weights.*member = parse_double(v);
                         },
                         [member](const Config& c) { return fmt_double(c.weights.*member); }});
        };
        auto add_aug = [&](const char* key, double AugmentationConfig::* member) {
            f.push_back({key,
                         [member](Config& c, const std::string& v) {
                             c.augmentation.*member = parse_double(v);
                         },
                         [member](const Config& c) {
                             return fmt_double(c.augmentation.*member);
                         }});
        };
        auto add_abl = [&](const char* key, bool AblationConfig::* member) {
            f.push_back({key,
                         [member](Config& c, const std::string& v) {
                             c.ablation.*member = parse_bool(v);
                         },
                         [member](const Config& c) {
                             return c.ablation.*member ? "true" : "false";
                         }});
        };

        add_u64("master_seed", &Config::master_seed);
        add_u64("total", &Config::total);
        f.push_back({"format_mode",
                     [](Config& c, const std::string& v) {
                         auto mode = format_mode_from_name(v);
                         if (!mode) throw std::runtime_error("unknown format_mode '" + v + "'");
                         c.format_mode = *mode;
                     },
                     [](const Config& c) { return std::string(format_mode_name(c.format_mode)); }});
        f.push_back({"render_style",
                     [](Config& c, const std::string& v) {
                         auto style = render_style_from_name(v);
                         if (!style) throw std::runtime_error("unknown render_style '" + v + "'");
                         c.render_style = *style;
                     },
                     [](const Config& c) { return std::string(render_style_name(c.render_style)); }});
        f.push_back({"template_path",
                     [](Config& c, const std::string& v) { c.template_path = v; },
                     [](const Config& c) { return c.template_path; }});
        f.push_back({"output_path",
                     [](Config& c, const std::string& v) { c.output_path = v; },
                     [](const Config& c) { return c.output_path; }});
        f.push_back({"emit_meta",
                     [](Config& c, const std::string& v) { c.emit_meta = parse_bool(v); },
                     [](const Config& c) { return c.emit_meta ? "true" : "false"; }});
        f.push_back({"threads",
                     [](Config& c, const std::string& v) {
                         c.threads = static_cast<unsigned>(parse_u64(v));
                     },
                     [](const Config& c) { return std::to_string(c.threads); }});

        add_size("max_addsub_digits", &Settings::max_addsub_digits);
        add_size("max_product_digits", &Settings::max_product_digits);
        add_size("max_quotient_digits", &Settings::max_quotient_digits);
        add_size("max_dividend_digits", &Settings::max_dividend_digits);

        add_weight("weight_copying", &CompositionWeights::copying);
        add_weight("weight_split", &CompositionWeights::split);
        add_weight("weight_comparison", &CompositionWeights::comparison);
        add_weight("weight_ordering", &CompositionWeights::ordering);
        add_weight("weight_addition", &CompositionWeights::addition);
        add_weight("weight_subtraction", &CompositionWeights::subtraction);
        add_weight("weight_mul_n1", &CompositionWeights::mul_n1);
        add_weight("weight_div_n1", &CompositionWeights::div_n1);
        add_weight("weight_mul_nm", &CompositionWeights::mul_nm);
        add_weight("weight_div_nm", &CompositionWeights::div_nm);
        add_weight("weight_mul_nm_special", &CompositionWeights::mul_nm_special);
        add_weight("weight_div_nm_special", &CompositionWeights::div_nm_special);

        add_aug("aug_space_removal", &AugmentationConfig::space_removal);
        add_aug("aug_mul_word", &AugmentationConfig::mul_word);
        add_aug("aug_add_word", &AugmentationConfig::add_word);
        add_aug("aug_sub_word", &AugmentationConfig::sub_word);
        add_aug("aug_div_word", &AugmentationConfig::div_word);

        add_abl("abl_omit_split", &AblationConfig::omit_split);
        add_abl("abl_omit_expansion", &AblationConfig::omit_expansion);
        add_abl("abl_omit_term_by_term", &AblationConfig::omit_term_by_term);
        add_abl("abl_omit_middle_product", &AblationConfig::omit_middle_product);
        add_abl("abl_no_cot", &AblationConfig::no_cot);

        f.push_back({"task",
                     [](Config& c, const std::string& v) {
                         if (!v.empty() && !plan_key_from_name(v))
                             throw std::runtime_error("unknown task '" + v + "'");
                         c.task_filter = v;
                     },
                     [](const Config& c) { return c.task_filter; }});
        f.push_back({"min_digits",
                     [](Config& c, const std::string& v) {
                         c.min_digits = static_cast<std::size_t>(parse_u64(v));
                     },
                     [](const Config& c) { return std::to_string(c.min_digits); }});
        f.push_back({"max_digits",
                     [](Config& c, const std::string& v) {
                         c.max_digits = static_cast<std::size_t>(parse_u64(v));
                     },
                     [](const Config& c) { return std::to_string(c.max_digits); }});
        return f;
    }();
    return kFields;
}

}  // namespace

std::optional<PlanKey> plan_key_from_name(std::string_view name) {
    bool special = false;
    constexpr std::string_view kSuffix = "_special";
    if (name.size() > kSuffix.size() &&
        name.substr(name.size() - kSuffix.size()) == kSuffix) {
        special = true;
        name.remove_suffix(kSuffix.size());
    }
    auto task = task_from_name(name);
    if (!task) return std::nullopt;
    if (special && *task != TaskKind::MulNM && *task != TaskKind::DivNM) return std::nullopt;
    return PlanKey{*task, special};
}

bool config_apply(Config& config, const std::string& key, const std::string& value) {
    for (const Field& field : fields()) {
        if (key == field.key) {
            field.set(config, value);
            return true;
        }
    }
    return false;
}

Config load_config_text(const std::string& text, const Config& base) {
    Config config = base;
    std::string body = trim_copy(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j = nlohmann::json::parse(body);
        for (const auto& [key, value] : j.items()) {
            std::string text_value;
            if (value.is_string())
                text_value = value.get<std::string>();
            else if (value.is_boolean())
                text_value = value.get<bool>() ? "true" : "false";
            else
                text_value = value.dump();
            if (!config_apply(config, key, text_value))
                throw std::runtime_error("unknown config key '" + key + "'");
        }
        return config;
    }

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = trim_copy(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        std::string key = trim_copy(trimmed.substr(0, eq));
        std::string value = trim_copy(trimmed.substr(eq + 1));
        if (!config_apply(config, key, value))
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
    }
    return config;
}

Config load_config_file(const std::string& path, const Config& base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_config_text(buffer.str(), base);
}

std::string config_to_kv(const Config& config) {
    std::ostringstream out;
    for (const Field& field : fields()) out << field.key << " = " << field.get(config) << "\n";
    return out.str();
}

std::string config_to_json(const Config& config) {
    nlohmann::ordered_json j;
    for (const Field& field : fields()) j[field.key] = field.get(config);
    return j.dump(2);
}

}  // namespace goatforge
