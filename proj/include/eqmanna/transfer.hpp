#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "eqmanna/model.hpp"

namespace eqmanna {

enum class TransferKind { rich_rich, rich_poor, poor_rich, poor_poor, fallback_pairing };

std::string_view to_string(TransferKind kind);

/// Whether moving an item valued `from_value` by the giver and `to_value` by
/// the receiver is a legal transfer of `kind` (values already divided by w).
/// The bi-valued table is the tri-valued one restricted to {-1, 1}.
bool transfer_legal(TransferKind kind, Value from_value, Value to_value, bool trivalued);

struct TransferRecord {
  TransferKind kind = TransferKind::rich_rich;
  ItemId item = kNone;
  AgentId from = kNone;
  AgentId to = kNone;
  Value from_value = 0;  // v_from(item), original units
  Value to_value = 0;    // v_to(item), original units
  Value gap_before = 0;  // max - min utility when the move fired, original units
};

enum class LoopEvent { assign, transfer, fallback, completion };

struct TransferOptions {
  /// nullopt: transfers searched in the order RR, RP, PR, PP with lowest
  /// (from, item, to) indices, greedy picks lowest indices. Otherwise both are
  /// randomised from this seed.
  std::optional<std::uint64_t> order_seed;
  /// Called after every move with the working (w-normalised) instance.
  std::function<void(const Instance&, const Allocation&, LoopEvent)> observer;
};

struct TransferResult {
  Allocation allocation;
  std::vector<TransferRecord> log;
  int fallback_rounds = 0;
  Value scale = 1;
};

/// Symmetric bi-valued ({-w, w}) normalized instances: returns a complete
/// allocation that is EQX. Throws NotApplicable on other classes and
/// InternalDefect if the loop ever stalls with |P| <= |R|.
TransferResult solve_bivalued_eqx(const Instance& instance, const TransferOptions& options = {});

/// Symmetric tri-valued ({-w, 0, w}) normalized instances: complete EQ1
/// allocation (also EQX with non-zero marginals).
TransferResult solve_trivalued_eq1(const Instance& instance, const TransferOptions& options = {});

}  // namespace eqmanna
