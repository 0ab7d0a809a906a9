#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "goatforge/cot.hpp"
#include "goatforge/sampler.hpp"
#include "goatforge/task.hpp"
#include "goatforge/templater.hpp"

namespace goatforge {

/// Relative share of each task in a generated dataset. The multi-digit
/// kinds carry an extra slice that forces special-case (direct-answer)
/// instances; it defaults to zero because special cases already arise
/// from plain sampling.
struct CompositionWeights {
    double copying = 2.5;
    double split = 2.5;
    double comparison = 2.5;
    double ordering = 2.5;
    double addition = 20.0;
    double subtraction = 20.0;
    double mul_n1 = 5.0;
    double div_n1 = 5.0;
    double mul_nm = 20.0;
    double div_nm = 20.0;
    double mul_nm_special = 0.0;
    double div_nm_special = 0.0;

    bool operator==(const CompositionWeights& other) const = default;
};

std::vector<WeightedKey> weighted_keys(const CompositionWeights& weights);

struct Config {
    Settings settings;
    CompositionWeights weights;
    AugmentationConfig augmentation;
    AblationConfig ablation;
    FormatMode format_mode = FormatMode::Natural;
    RenderStyle render_style = RenderStyle::Ascii;
    std::uint64_t master_seed = 0;
    std::uint64_t total = 1000;
    std::string template_path;  // empty = built-in templates
    std::string output_path;    // empty = stdout
    bool emit_meta = false;
    unsigned threads = 0;       // 0 = hardware concurrency

    /// Restrict generation to one plan row ("mul_nm", "div_nm_special",
    /// ...); empty means the full weighted mix.
    std::string task_filter;
    /// Operand digit-range override; 0 = per-task defaults.
    std::size_t min_digits = 0;
    std::size_t max_digits = 0;

    bool operator==(const Config& other) const = default;
};

/// Parses a plan-row name: a task name with an optional "_special"
/// suffix for the forced special-case rows.
std::optional<PlanKey> plan_key_from_name(std::string_view name);

/// Applies one "key = value" setting. Returns false for an unknown key;
/// throws std::runtime_error on an unparsable value.
bool config_apply(Config& config, const std::string& key, const std::string& value);

/// Key-value or JSON file (detected by content), applied over `base`.
Config load_config_file(const std::string& path, const Config& base = Config{});
Config load_config_text(const std::string& text, const Config& base = Config{});

/// Flat "key = value" form covering every field; load_config_text on the
/// result reproduces the config exactly.
std::string config_to_kv(const Config& config);
std::string config_to_json(const Config& config);

}  // namespace goatforge
