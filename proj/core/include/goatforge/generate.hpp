#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "goatforge/config.hpp"
#include "goatforge/record.hpp"
#include "goatforge/sampler.hpp"
#include "goatforge/templater.hpp"

namespace goatforge {

struct GenStats {
    std::uint64_t records = 0;
    std::map<std::string, std::uint64_t> per_row;  // plan-key name -> count

    bool operator==(const GenStats& other) const = default;
};

/// Builds record `index` of a run. Pure function of (config, plan layout,
/// index): the generator stream is derived from (master_seed, index), so
/// any worker can produce any record.
Record make_record(const Config& config, const std::vector<Template>& templates,
                   const CompositionPlan& plan,
                   const std::vector<std::uint32_t>& assignment, std::uint64_t index);

/// Streams the whole dataset as JSONL in index order. Fans out across
/// config.threads workers in fixed-size blocks merged back in order, so
/// the bytes written never depend on the thread count.
GenStats generate_dataset(const Config& config, std::ostream& out);

}  // namespace goatforge
