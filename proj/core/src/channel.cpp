#include "scrf/channel.hpp"

namespace scrf {

BudgetLedger::BudgetLedger(std::uint32_t n, Rational alpha, Rational beta) : n_(n), alpha_(alpha), beta_(beta) {
  caps_[0] = alpha.floor_times(n);
  caps_[1] = beta.floor_times(n);
}

bool BudgetLedger::charge(Party p) {
  if (remaining(p) == 0) return false;
  ++used_[index_of(p)];
  return true;
}

}  // namespace scrf
