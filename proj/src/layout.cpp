#include "qse/layout.hpp"

#include <algorithm>
#include <set>

namespace qse {

SystemLayout::SystemLayout(std::initializer_list<Factor> fs) : factors_(fs) { validate(); }
SystemLayout::SystemLayout(std::vector<Factor> fs) : factors_(std::move(fs)) { validate(); }

void SystemLayout::validate() const {
  std::set<std::string> seen;
  for (const auto& f : factors_) {
    if (f.label.empty()) throw ContractError("layout: empty factor label");
    if (f.dim < 1) throw ContractError("layout: factor '" + f.label + "' has dim < 1");
    if (!seen.insert(f.label).second)
      throw ContractError("layout: duplicate factor label '" + f.label + "'");
  }
}

int SystemLayout::total_dim() const {
  int d = 1;
  for (const auto& f : factors_) d *= f.dim;
  return d;
}

bool SystemLayout::has(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

int SystemLayout::index_of(const std::string& label) const {
  for (int i = 0; i < count(); ++i)
    if (factors_[i].label == label) return i;
  throw ContractError("layout: unknown factor label '" + label + "'");
}

std::vector<int> SystemLayout::indices_of(const std::vector<std::string>& labels) const {
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

SystemLayout SystemLayout::keep(const std::vector<std::string>& labels) const {
  for (const auto& l : labels) (void)index_of(l);
  std::vector<Factor> fs;
  for (const auto& f : factors_)
    if (std::find(labels.begin(), labels.end(), f.label) != labels.end()) fs.push_back(f);
  return SystemLayout(std::move(fs));
}

SystemLayout SystemLayout::drop(const std::vector<std::string>& labels) const {
  for (const auto& l : labels) (void)index_of(l);
  std::vector<Factor> fs;
  for (const auto& f : factors_)
    if (std::find(labels.begin(), labels.end(), f.label) == labels.end()) fs.push_back(f);
  return SystemLayout(std::move(fs));
}

SystemLayout SystemLayout::tensor(const SystemLayout& other) const {
  std::vector<Factor> fs = factors_;
  for (const auto& f : other.factors_) fs.push_back(f);
  return SystemLayout(std::move(fs));  // validate() rejects collisions
}

bool SystemLayout::operator==(const SystemLayout& other) const {
  if (count() != other.count()) return false;
  for (int i = 0; i < count(); ++i)
    if (factors_[i].label != other.factors_[i].label || factors_[i].dim != other.factors_[i].dim)
      return false;
  return true;
}

std::string SystemLayout::str() const {
  std::string s;
  for (int i = 0; i < count(); ++i) {
    if (i) s += "*";
    s += factors_[i].label + ":" + std::to_string(factors_[i].dim);
  }
  return s;
}

std::vector<int> layout_strides(const SystemLayout& layout) {
  std::vector<int> strides(layout.count(), 1);
  for (int i = layout.count() - 2; i >= 0; --i)
    strides[i] = strides[i + 1] * layout[i + 1].dim;
  return strides;
}

}  // namespace qse
