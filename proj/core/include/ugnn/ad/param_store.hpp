#pragma once

#include <map>
#include <string>

#include "ugnn/ad/tape.hpp"
#include "ugnn/ad/tensor.hpp"

namespace ugnn::ad {

/// Gradients keyed like the parameter store.
using GradMap = std::map<std::string, Mat>;

/// Named map from parameter path to trainable tensor. Names are unique and
/// iterated in lexicographic order, so any walk over the store is
/// deterministic.
class ParameterStore {
 public:
  void insert(const std::string& name, Mat value);
  bool contains(const std::string& name) const;
  Mat& at(const std::string& name);
  const Mat& at(const std::string& name) const;

  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  /// Registers every parameter as a trainable leaf on the tape; returns the
  /// name -> node id binding used to read gradients back.
  std::map<std::string, int> bind(Tape& tape) const;

  /// Gradients for every parameter after tape.backward(); parameters off the
  /// loss path get zero matrices.
  GradMap collect_grads(const Tape& tape, const std::map<std::string, int>& ids) const;

  GradMap zero_grads() const;

 private:
  std::map<std::string, Tensor> params_;
};

}  // namespace ugnn::ad
