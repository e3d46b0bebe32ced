/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#ifndef JTR_VARIABLE_HPP
#define JTR_VARIABLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "jtr/errors.hpp"

namespace jtr {

// Dense variable handle. Ids are assigned in declaration order and double
// as indices into VariableSet.
using VarId = std::int32_t;

struct Variable {
  VarId id = -1;
  std::string name;                 // unique symbolic id in network files
  std::string label;                // display name
  int cardinality = 0;              // |Sp(v)|, >= 1
  std::vector<std::string> states;  // display names, size == cardinality
};

// Ordered, id-unique collection of variables.
class VariableSet {
 public:
  VarId add(std::string name, int cardinality, std::vector<std::string> states = {},
            std::string label = {}) {
    if (cardinality < 1) throw DomainError("variable '" + name + "': cardinality must be >= 1");
    if (find(name) >= 0) throw DomainError("duplicate variable '" + name + "'");
    if (!states.empty() && static_cast<int>(states.size()) != cardinality)
      throw DomainError("variable '" + name + "': state list does not match cardinality");
    if (states.empty()) {
      states.reserve(cardinality);
      for (int s = 0; s < cardinality; ++s) states.push_back("s" + std::to_string(s));
    }
    if (label.empty()) label = name;
    const VarId id = static_cast<VarId>(vars_.size());
    vars_.push_back(Variable{id, std::move(name), std::move(label), cardinality, std::move(states)});
    return id;
  }

  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }

  const Variable& operator[](VarId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= vars_.size())
      throw DomainError("unknown variable id " + std::to_string(id));
    return vars_[static_cast<std::size_t>(id)];
  }

  int cardinality(VarId id) const { return (*this)[id].cardinality; }

  // -1 when absent.
  VarId find(const std::string& name) const {
    for (const auto& v : vars_)
      if (v.name == name) return v.id;
    return -1;
  }

  std::vector<int> cards_for(const std::vector<VarId>& domain) const {
    std::vector<int> cards;
    cards.reserve(domain.size());
    for (VarId v : domain) cards.push_back(cardinality(v));
    return cards;
  }

  std::vector<VarId> all_ids() const {
    std::vector<VarId> ids(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) ids[i] = vars_[i].id;
    return ids;
  }

  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

 private:
  std::vector<Variable> vars_;
};

}  // namespace jtr

#endif  // JTR_VARIABLE_HPP
