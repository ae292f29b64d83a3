#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace qse {

// Raised when a caller violates a documented precondition (shape, hermiticity,
// layout addressing, parameter range).
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an algorithm fails to reach its accuracy target.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Factor {
  std::string label;
  int dim = 0;
};

// Ordered, labeled tensor factors. Factor order is significant and is never
// permuted implicitly; every multipartite operator in the library is addressed
// through one of these.
class SystemLayout {
 public:
  SystemLayout() = default;
  SystemLayout(std::initializer_list<Factor> fs);
  explicit SystemLayout(std::vector<Factor> fs);

  int total_dim() const;
  int count() const { return static_cast<int>(factors_.size()); }
  const Factor& operator[](int i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const { return factors_; }

  bool has(const std::string& label) const;
  // Throws ContractError for unknown labels.
  int index_of(const std::string& label) const;
  std::vector<int> indices_of(const std::vector<std::string>& labels) const;

  // Sub-layouts preserve the original factor order.
  SystemLayout keep(const std::vector<std::string>& labels) const;
  SystemLayout drop(const std::vector<std::string>& labels) const;
  SystemLayout tensor(const SystemLayout& other) const;

  bool operator==(const SystemLayout& other) const;
  std::string str() const;

 private:
  std::vector<Factor> factors_;
  void validate() const;
};

// Row-major strides: flat index = sum_i idx[i] * stride[i].
std::vector<int> layout_strides(const SystemLayout& layout);

}  // namespace qse
