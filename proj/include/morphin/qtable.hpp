#ifndef MORPHIN_QTABLE_HPP
#define MORPHIN_QTABLE_HPP

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace morphin {

// One environment interaction. next_state is the sink state when terminal.
struct Transition {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
  bool terminal = false;
};

struct MaxEntry {
  double value = 0.0;
  int action = 0;
};

// Dense action x state value table. Rows are actions so that action-space
// growth is a row append that leaves existing entries untouched. New tables
// and new rows are all zeros. The action count only ever grows.
class QTable {
 public:
  QTable(int action_count, int state_count)
      : actions_(action_count), states_(state_count) {
    if (action_count <= 0 || state_count <= 0)
      throw std::invalid_argument("QTable: action_count and state_count must be positive");
    values_.assign(static_cast<std::size_t>(actions_) * states_, 0.0);
  }

  int action_count() const { return actions_; }
  int state_count() const { return states_; }

  double at(int state, int action) const {
    check_bounds(state, action);
    return values_[index(state, action)];
  }

  void set(int state, int action, double value) {
    check_bounds(state, action);
    if (!std::isfinite(value))
      throw std::invalid_argument("QTable::set: value must be finite");
    values_[index(state, action)] = value;
  }

  // Maximum value over the current action set and the first action
  // attaining it. Ties break to the lowest action index so repeated calls
  // on identical tables are deterministic.
  MaxEntry max_over_actions(int state) const {
    if (state < 0 || state >= states_)
      throw std::out_of_range("QTable::max_over_actions: state " + std::to_string(state) +
                              " out of range [0," + std::to_string(states_) + ")");
    MaxEntry best{values_[index(state, 0)], 0};
    for (int a = 1; a < actions_; ++a) {
      const double v = values_[index(state, a)];
      if (v > best.value) best = {v, a};
    }
    return best;
  }

  // Grows the action set. Existing entries keep their exact values; the
  // appended rows are zero.
  void expand_actions(int new_action_count) {
    if (new_action_count <= actions_)
      throw std::invalid_argument("QTable::expand_actions: new_action_count " +
                                  std::to_string(new_action_count) +
                                  " must exceed current count " + std::to_string(actions_));
    values_.resize(static_cast<std::size_t>(new_action_count) * states_, 0.0);
    actions_ = new_action_count;
  }

  // Snapshot export: one row per action, one column per state, header
  // state_0..state_{N-1}, six decimals.
  void write_csv(std::ostream& out) const;

 private:
  std::size_t index(int state, int action) const {
    return static_cast<std::size_t>(action) * states_ + state;
  }
  void check_bounds(int state, int action) const {
    if (state < 0 || state >= states_)
      throw std::out_of_range("QTable: state " + std::to_string(state) + " out of range [0," +
                              std::to_string(states_) + ")");
    if (action < 0 || action >= actions_)
      throw std::out_of_range("QTable: action " + std::to_string(action) + " out of range [0," +
                              std::to_string(actions_) + ")");
  }

  int actions_;
  int states_;
  std::vector<double> values_;
};

}  // namespace morphin

#endif  // MORPHIN_QTABLE_HPP
