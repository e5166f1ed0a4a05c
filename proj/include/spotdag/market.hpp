#pragma once

// Price and availability environment: spot price trace, grant rule, billing and
// the self-owned instance pool.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace spotdag::market {

inline constexpr double kSlotWidth = 1.0 / 12.0;
inline constexpr double kOnDemandPrice = 1.0;

struct PriceModel {
  double mean = 0.13;   // mean of the exponential before bounding
  double lower = 0.12;
  double upper = 1.0;
};

/// Per-slot spot prices; immutable once built and safe to share across threads.
class SpotMarket {
 public:
  SpotMarket() = default;
  explicit SpotMarket(std::vector<double> prices, double slot_width = kSlotWidth,
                      double ondemand_price = kOnDemandPrice);

  /// i.i.d. exponential draws rejection-resampled into [lower, upper]; enough slots
  /// to cover [0, horizon]. Deterministic given the seed.
  static SpotMarket sample(std::uint64_t seed, double horizon, const PriceModel& model = {});

  double slot_width() const { return slot_width_; }
  double ondemand_price() const { return ondemand_price_; }
  std::size_t slot_count() const { return prices_.size(); }
  double horizon() const { return slot_width_ * static_cast<double>(prices_.size()); }
  std::span<const double> prices() const { return prices_; }

  /// Throws HorizonError past the last slot.
  double price(std::size_t slot) const;

  /// Slot containing time t (slots are half-open [k w, (k + 1) w)).
  std::size_t slot_of(double t) const;
  double slot_start(std::size_t slot) const { return slot_width_ * static_cast<double>(slot); }

  void write_csv(std::ostream& out) const;
  static SpotMarket read_csv(std::istream& in, double slot_width = kSlotWidth);

 private:
  std::vector<double> prices_;
  double slot_width_ = kSlotWidth;
  double ondemand_price_ = kOnDemandPrice;
};

/// All-or-nothing grant: `requested` when bid >= slot price (or when no bid is
/// placed), zero otherwise.
int grant_spot(const SpotMarket& market, std::size_t slot, std::optional<double> bid, int requested);

enum class InstanceClass { SelfOwned, Spot, OnDemand };

/// Billing by instance-time: self-owned is free, spot pays the slot price and
/// on-demand the fixed price (1).
double bill(InstanceClass kind, double count, double duration, double slot_price = 0.0);

/// Self-owned instances reservable over half-open intervals [start, end).
class OwnedPool {
 public:
  explicit OwnedPool(int capacity = 0);

  int capacity() const { return capacity_; }

  /// Idle instances at time t.
  int idle_at(double t) const;
  /// Minimum idle count over [start, end).
  int idle_over(double start, double end) const;

  /// Reserves `count` instances over [start, end); returns false (and changes
  /// nothing) when that would oversubscribe.
  bool reserve(double start, double end, int count);

  /// Folds reservation edges before t into a base level. Queries before t are
  /// no longer meaningful afterwards.
  void release_before(double t);

  std::size_t breakpoint_count() const { return deltas_.size(); }

 private:
  int used_before_first() const { return folded_; }

  int capacity_ = 0;
  int folded_ = 0;                 // usage contributed by pruned edges
  std::map<double, int> deltas_;   // usage change at each edge
  double latest_start_ = -1e300;   // no usage increases after this time
};

}  // namespace spotdag::market
