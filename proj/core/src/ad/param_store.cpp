#include "ugnn/ad/param_store.hpp"

#include "ugnn/common/error.hpp"

namespace ugnn::ad {

void ParameterStore::insert(const std::string& name, Mat value) {
  auto [it, fresh] = params_.emplace(name, Tensor(std::move(value), true));
  if (!fresh) throw ContractViolation("ParameterStore: duplicate parameter " + name);
}

bool ParameterStore::contains(const std::string& name) const {
  return params_.count(name) != 0;
}

Mat& ParameterStore::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw ContractViolation("ParameterStore: unknown parameter " + name);
  return it->second.value;
}

const Mat& ParameterStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw ContractViolation("ParameterStore: unknown parameter " + name);
  return it->second.value;
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += t.value.size();
  return n;
}

std::map<std::string, int> ParameterStore::bind(Tape& tape) const {
  std::map<std::string, int> ids;
  for (const auto& [name, t] : params_) ids[name] = tape.leaf(t.value, true);
  return ids;
}

GradMap ParameterStore::collect_grads(const Tape& tape,
                                      const std::map<std::string, int>& ids) const {
  GradMap grads;
  for (const auto& [name, t] : params_) {
    auto it = ids.find(name);
    if (it == ids.end()) throw ContractViolation("collect_grads: unbound parameter " + name);
    grads[name] = tape.grad(it->second);
  }
  return grads;
}

GradMap ParameterStore::zero_grads() const {
  GradMap grads;
  for (const auto& [name, t] : params_) grads[name] = Mat(t.value.rows, t.value.cols);
  return grads;
}

}  // namespace ugnn::ad
