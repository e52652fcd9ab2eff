#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eqmanna {

using Value = std::int64_t;
using AgentId = int;
using ItemId = int;

inline constexpr int kNone = -1;

/// An additive fair division instance: n agents, m items, and an integer
/// value v_i(o) for every (agent, item) pair. Immutable after construction.
class Instance {
 public:
  Instance() = default;
  /// `rows` must hold `num_agents` rows of equal length.
  Instance(int num_agents, std::vector<std::vector<Value>> rows, std::string name = {});
  /// Row-major matrix with explicit item count; allows m = 0.
  Instance(int num_agents, int num_items, std::vector<Value> row_major, std::string name = {});

  int num_agents() const noexcept { return n_; }
  int num_items() const noexcept { return m_; }
  Value value(AgentId agent, ItemId item) const { return values_[static_cast<std::size_t>(agent) * m_ + item]; }
  std::span<const Value> row(AgentId agent) const {
    return {values_.data() + static_cast<std::size_t>(agent) * m_, static_cast<std::size_t>(m_)};
  }
  std::vector<std::vector<Value>> rows() const;
  Value bundle_value(AgentId agent, std::span<const ItemId> items) const;

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Sub-instance over the listed items (in that order); names are kept.
  Instance restricted_to(std::span<const ItemId> items) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.values_ == b.values_;
  }

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<Value> values_;
  std::string name_;
};

enum class ItemKind { objective_good, objective_chore, subjective };

/// Partition of the items into O+, O- and O±. Items valued 0 by every agent
/// are objective goods.
struct ItemClass {
  std::vector<ItemId> objective_goods;
  std::vector<ItemId> objective_chores;
  std::vector<ItemId> subjective;
  std::vector<ItemKind> kind;  // per item

  bool is_objective() const noexcept { return subjective.empty(); }
};

ItemClass classify_items(const Instance& instance);
ItemKind item_kind(const Instance& instance, ItemId item);

struct ValuationClass {
  bool is_objective = false;
  bool is_identical = false;
  bool is_binary = false;                // all values in {0, 1}
  bool is_symmetric_bivalued = false;    // {-w, +w}
  bool is_symmetric_trivalued = false;   // {-w, 0, +w}
  bool is_normalized = false;
  bool is_type_normalized = false;
  Value scale = 1;                       // w, when a symmetric flag holds
  std::optional<Value> good_sum;         // g
  std::optional<Value> chore_sum;        // c
  std::optional<Value> total;            // v_i(O)
};

ValuationClass classify_valuations(const Instance& instance);

/// Possibly partial allocation. Bundles are stored as an owner per item, so
/// disjointness holds by construction; utilities are cached and updated on
/// every mutation.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(const Instance& instance);
  Allocation(int num_agents, int num_items);

  static Allocation from_owners(const Instance& instance, std::vector<AgentId> owners);
  static Allocation from_bundles(const Instance& instance, const std::vector<std::vector<ItemId>>& bundles);

  int num_agents() const noexcept { return static_cast<int>(utilities_.size()); }
  int num_items() const noexcept { return static_cast<int>(owner_.size()); }

  AgentId owner(ItemId item) const { return owner_[item]; }
  std::span<const AgentId> owners() const noexcept { return owner_; }
  bool is_allocated(ItemId item) const { return owner_[item] != kNone; }
  bool is_complete() const noexcept { return allocated_ == num_items(); }
  int allocated_count() const noexcept { return allocated_; }

  std::vector<ItemId> bundle(AgentId agent) const;
  std::vector<std::vector<ItemId>> bundles() const;
  std::vector<ItemId> allocated() const;
  std::vector<ItemId> unallocated() const;
  int bundle_size(AgentId agent) const { return sizes_[agent]; }

  Value utility(AgentId agent) const { return utilities_[agent]; }
  std::span<const Value> utilities() const noexcept { return utilities_; }

  /// Throws AllocationError (reporting the current owner) if already allocated.
  void assign(const Instance& instance, ItemId item, AgentId agent);
  void unassign(const Instance& instance, ItemId item);
  /// Throws AllocationError if `item` is not in `from`'s bundle.
  void transfer(const Instance& instance, ItemId item, AgentId from, AgentId to);

  /// Recompute every utility from scratch and compare with the cache.
  bool cache_consistent(const Instance& instance) const;

  friend bool operator==(const Allocation& a, const Allocation& b) { return a.owner_ == b.owner_; }

 private:
  void check_cache(const Instance& instance) const;

  std::vector<AgentId> owner_;
  std::vector<Value> utilities_;
  std::vector<int> sizes_;
  int allocated_ = 0;
};

/// v_i(A_i), recomputed from the bundle (not the cache).
Value utility(const Instance& instance, const Allocation& allocation, AgentId agent);

}  // namespace eqmanna
