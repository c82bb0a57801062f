#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace influence {

/// Deliberate corruption used to confirm that the suite can fail.
enum class Mutation { kNone, kGradient };

/// Throws InvalidInput for names other than none and gradient.
Mutation mutation_from_string(const std::string& name);

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PropertyReport {
  std::vector<PropertyResult> results;
  bool passed() const;
};

/// Runs the invariant checks of every library module on seeded instances.
PropertyReport run_property_suite(std::uint64_t seed, Mutation mutation = Mutation::kNone);

}  // namespace influence
