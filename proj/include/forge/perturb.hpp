#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "forge/core.hpp"

namespace forge::perturb {

enum class Kind { mask, incorrect, random_trace, no_nl };

struct PerturbSpec {
  Kind kind = Kind::mask;
  std::vector<int> target_indices;
  std::string mask_token;  // default empty string; "_" is the display variant
  uint64_t rng_seed = 0;
};

/// Mask tokens studied for the mask-choice replication.
const std::vector<std::string>& mask_token_choices();  // "", "N/A", "[mask]", "?", "_"

/// Flags the targeted states masked and substitutes the mask token; the
/// answer line and all untargeted text stay unchanged.
Exemplar mask_states(const Exemplar& ex, const PerturbSpec& spec);

/// Task-specific Mask1/Mask2 presets:
///   letcat:   1 = extraction letters, 2 = concatenation states
///   coinflip: 1 = first transition,   2 = second transition
///   gsm:      1 = intermediate results only, 2 = whole equations
enum class MaskPreset { mask1, mask2 };
Exemplar apply_mask_preset(const Exemplar& ex, MaskPreset preset,
                           const std::string& mask_token = "");

/// Explicit wrong values per state index; states not listed are corrupted
/// from the seed. Downstream dependent states and the answer line are
/// updated consistently with the wrong values.
struct CorruptorConfig {
  std::map<int, std::string> overrides;
};

Exemplar corrupt_states(const Exemplar& ex, const PerturbSpec& spec,
                        const CorruptorConfig& corruptor = {});

/// Replaces the whole explanation body with one taken from a donor exemplar,
/// keeping the question. The gold answer line is kept unless
/// `replace_answer_line` is set.
Exemplar randomize_trace(const Exemplar& ex, const std::vector<Exemplar>& donor_pool,
                         uint64_t seed, bool replace_answer_line = false);

/// Drops the natural-language glue: the template is rebuilt from the state
/// values joined by commas and periods, following the sentence structure of
/// the original template.
Exemplar strip_nl(const Exemplar& ex);

enum class OperatorClass { add_only, mul_only, mixed, other };
std::string operator_class_to_string(OperatorClass c);

/// Disjoint partition of gsm exemplars by the operator set across all trace
/// equations.
OperatorClass classify_operators(const Exemplar& ex);
std::map<OperatorClass, std::vector<Exemplar>> partition_by_operators(
    const std::vector<Exemplar>& pool);

/// m/2 exemplars drawn from each set without replacement, interleaved
/// A,B,A,B,...; deterministic in seed.
std::vector<Exemplar> make_mixture_set(const std::vector<Exemplar>& set_a,
                                       const std::vector<Exemplar>& set_b, int shots,
                                       uint64_t seed);

}  // namespace forge::perturb
