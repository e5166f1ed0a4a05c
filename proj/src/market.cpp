#include "spotdag/market.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "spotdag/errors.hpp"
#include "spotdag/rng.hpp"

namespace spotdag::market {

SpotMarket::SpotMarket(std::vector<double> prices, double slot_width, double ondemand_price)
    : prices_(std::move(prices)), slot_width_(slot_width), ondemand_price_(ondemand_price) {
  if (!(slot_width_ > 0.0)) throw std::invalid_argument("slot width must be positive");
}

SpotMarket SpotMarket::sample(std::uint64_t seed, double horizon, const PriceModel& model) {
  if (!(horizon > 0.0)) throw std::invalid_argument("price trace horizon must be positive");
  if (!(model.lower < model.upper) || !(model.mean > 0.0)) {
    throw std::invalid_argument("invalid price model");
  }
  const auto slots = static_cast<std::size_t>(std::ceil(horizon / kSlotWidth)) + 1;
  std::mt19937_64 rng(seed);
  std::vector<double> prices(slots);
  for (auto& p : prices) {
    double draw;
    do {
      draw = rng::exponential(rng, model.mean);
    } while (draw < model.lower || draw > model.upper);
    p = draw;
  }
  return SpotMarket(std::move(prices));
}

double SpotMarket::price(std::size_t slot) const {
  if (slot >= prices_.size()) {
    throw HorizonError("slot " + std::to_string(slot) + " beyond price trace of " +
                       std::to_string(prices_.size()) + " slots");
  }
  return prices_[slot];
}

std::size_t SpotMarket::slot_of(double t) const {
  if (t <= 0.0) return 0;
  // Nudge so boundaries computed as k * w land in slot k rather than k - 1.
  return static_cast<std::size_t>(std::floor(t / slot_width_ + 1e-9));
}

void SpotMarket::write_csv(std::ostream& out) const {
  out << "slot_index,price\n";
  char buf[64];
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, prices_[i]);
    out << buf;
  }
}

SpotMarket SpotMarket::read_csv(std::istream& in, double slot_width) {
  std::string line;
  std::vector<double> prices;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("slot_index", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("malformed price row: " + line);
    const auto index = std::stoull(line.substr(0, comma));
    if (index != prices.size()) {
      throw std::runtime_error("price rows must be contiguous from slot 0; got slot " +
                               std::to_string(index));
    }
    prices.push_back(std::stod(line.substr(comma + 1)));
  }
  return SpotMarket(std::move(prices), slot_width);
}

int grant_spot(const SpotMarket& market, std::size_t slot, std::optional<double> bid, int requested) {
  if (requested < 0) throw std::invalid_argument("negative spot request");
  const double price = market.price(slot);
  if (!bid || *bid >= price) return requested;
  return 0;
}

double bill(InstanceClass kind, double count, double duration, double slot_price) {
  if (duration < 0.0) throw std::invalid_argument("negative billing duration");
  switch (kind) {
    case InstanceClass::SelfOwned:
      return 0.0;
    case InstanceClass::Spot:
      return slot_price * count * duration;
    case InstanceClass::OnDemand:
      return kOnDemandPrice * count * duration;
  }
  return 0.0;
}

OwnedPool::OwnedPool(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw std::invalid_argument("pool capacity must be nonnegative");
}

int OwnedPool::idle_at(double t) const {
  int used = used_before_first();
  for (auto it = deltas_.begin(); it != deltas_.end() && it->first <= t; ++it) used += it->second;
  return capacity_ - used;
}

int OwnedPool::idle_over(double start, double end) const {
  int used = used_before_first();
  auto it = deltas_.begin();
  for (; it != deltas_.end() && it->first <= start; ++it) used += it->second;
  int peak = used;
  if (start < latest_start_) {
    for (; it != deltas_.end() && it->first < end; ++it) {
      used += it->second;
      peak = std::max(peak, used);
    }
  }
  return capacity_ - peak;
}

bool OwnedPool::reserve(double start, double end, int count) {
  if (count < 0) throw std::invalid_argument("negative reservation");
  if (count == 0 || !(end > start)) return true;
  if (idle_over(start, end) < count) return false;
  deltas_[start] += count;
  deltas_[end] -= count;
  latest_start_ = std::max(latest_start_, start);
  return true;
}

void OwnedPool::release_before(double t) {
  auto it = deltas_.begin();
  while (it != deltas_.end() && it->first < t) {
    folded_ += it->second;
    it = deltas_.erase(it);
  }
}

}  // namespace spotdag::market
