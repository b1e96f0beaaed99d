#pragma once

#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace romshaper {

/// Commanded task: stride length (m, along the ground) and ground incline.
struct Task {
  double stride = 0.0;
  double incline = 0.0;

  bool operator==(const Task&) const = default;
};

struct Axis {
  double step = 0.1;
  double lo = 0.0;
  double hi = 0.0;
};

/// Integer grid coordinates; the cell center is (i * stride.step,
/// j * incline.step).
using Cell = std::pair<int, int>;

/// Discretized task set with curriculum bookkeeping. Cell sets are ordered,
/// so iteration order is deterministic.
class TaskGrid {
 public:
  TaskGrid() = default;
  TaskGrid(Axis stride, Axis incline);

  const Axis& stride_axis() const { return stride_; }
  const Axis& incline_axis() const { return incline_; }
  const std::set<Cell>& active() const { return active_; }
  const std::map<Cell, bool>& success() const { return success_; }
  int size() const { return static_cast<int>(active_.size()); }

  Task TaskAt(const Cell& cell) const;
  /// Nearest cell to a task.
  Cell CellOf(const Task& task) const;
  bool InBounds(const Cell& cell) const;

  /// Adds a cell; rejects cells outside the bounds.
  void Activate(const Cell& cell);
  void SetSuccess(const Cell& cell, bool ok);

  /// Every in-bounds cell of the axis-aligned rectangle of tasks.
  static std::vector<Cell> CellsInRange(const TaskGrid& grid, double stride_lo,
                                        double stride_hi, double incline_lo,
                                        double incline_hi);

  bool operator==(const TaskGrid&) const;

 private:
  Axis stride_;
  Axis incline_;
  std::set<Cell> active_;
  std::map<Cell, bool> success_;
};

/// N = max(1, floor(rho * |grid|)) distinct cells drawn uniformly without
/// replacement, returned as cell-center tasks in draw order.
std::vector<Cell> SampleTaskCells(const TaskGrid& grid, double rho,
                                  std::mt19937_64& rng);
std::vector<Task> SampleTasks(const TaskGrid& grid, double rho,
                              std::mt19937_64& rng);
int NumSampledTasks(int grid_size, double rho);

/// Adds the in-bounds 4-neighbours of every cell whose last evaluation
/// succeeded. Never removes cells.
TaskGrid CurriculumExpand(const TaskGrid& grid);

}  // namespace romshaper
