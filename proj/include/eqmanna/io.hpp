#pragma once

#include <optional>
#include <string>

#include "eqmanna/model.hpp"

namespace eqmanna {

struct InstanceDocument {
  Instance instance;
  std::optional<std::string> regime_claim;
};

struct AllocationDocument {
  Allocation allocation;
  std::optional<std::string> source;
};

/// Canonical text form: a JSON object with fields name, agents, items,
/// values (one row per line) and an optional regime_claim, in that order,
/// newline-terminated. Parsing then writing reproduces the bytes.
std::string write_instance(const Instance& instance, const std::optional<std::string>& regime_claim = std::nullopt);
/// Throws ParseError with the offending line and field.
InstanceDocument parse_instance(const std::string& text);

/// Allocation file: bundles (one bundle per line, item indices ascending) and
/// an optional source. Items missing from every bundle stay unallocated.
std::string write_allocation(const Allocation& allocation, const std::optional<std::string>& source = std::nullopt);
AllocationDocument parse_allocation(const Instance& instance, const std::string& text);

InstanceDocument load_instance(const std::string& path);
AllocationDocument load_allocation(const Instance& instance, const std::string& path);
void save_text(const std::string& path, const std::string& text);

}  // namespace eqmanna
