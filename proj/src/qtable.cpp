#include "morphin/qtable.hpp"

#include <cstdio>
#include <ostream>

namespace morphin {

void QTable::write_csv(std::ostream& out) const {
  for (int s = 0; s < states_; ++s) {
    if (s > 0) out << ',';
    out << "state_" << s;
  }
  out << '\n';
  char buf[64];
  for (int a = 0; a < actions_; ++a) {
    for (int s = 0; s < states_; ++s) {
      std::snprintf(buf, sizeof(buf), "%.6f", values_[index(s, a)]);
      if (s > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace morphin
