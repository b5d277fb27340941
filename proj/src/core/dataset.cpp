#include "cosarc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cosarc {

Dataset::Dataset(std::size_t p, std::vector<ObservedRecord> records) : p_(p) {
  records_.reserve(records.size());
  for (auto& r : records) add(std::move(r));
}

void Dataset::add(ObservedRecord record) {
  if (record.x.size() != p_) {
    throw std::invalid_argument("record has " + std::to_string(record.x.size()) +
                                " covariates, dataset expects " + std::to_string(p_));
  }
  if (!(record.t_tilde > 0.0) || !std::isfinite(record.t_tilde)) {
    throw std::invalid_argument("observed time must be finite and > 0");
  }
  records_.push_back(std::move(record));
}

std::size_t Dataset::event_count() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const auto& r) { return r.event; }));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(p_);
  out.records_.reserve(indices.size());
  for (auto i : indices) out.records_.push_back(records_.at(i));
  return out;
}

Dataset Dataset::head(std::size_t n) const {
  Dataset out(p_);
  n = std::min(n, records_.size());
  out.records_.assign(records_.begin(), records_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

Dataset Dataset::project(std::size_t columns) const {
  if (columns > p_) throw std::invalid_argument("projection wider than dataset");
  Dataset out(columns);
  out.records_.reserve(records_.size());
  for (const auto& r : records_) {
    out.records_.push_back({Covariates(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(columns)),
                            r.t_tilde, r.event});
  }
  return out;
}

Dataset Dataset::flipped() const {
  Dataset out = *this;
  for (auto& r : out.records_) r.event = !r.event;
  return out;
}

}  // namespace cosarc
