#include "romshaper/learn/task_grid.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace romshaper {
namespace {

constexpr double kBoundEps = 1e-9;

}  // namespace

TaskGrid::TaskGrid(Axis stride, Axis incline)
    : stride_(stride), incline_(incline) {
  if (!(stride_.step > 0 && incline_.step > 0)) {
    throw std::invalid_argument("TaskGrid: steps must be positive");
  }
  if (stride_.lo > stride_.hi || incline_.lo > incline_.hi) {
    throw std::invalid_argument("TaskGrid: empty bounds");
  }
}

Task TaskGrid::TaskAt(const Cell& cell) const {
  return Task{cell.first * stride_.step, cell.second * incline_.step};
}

Cell TaskGrid::CellOf(const Task& task) const {
  return {static_cast<int>(std::lround(task.stride / stride_.step)),
          static_cast<int>(std::lround(task.incline / incline_.step))};
}

bool TaskGrid::InBounds(const Cell& cell) const {
  const Task t = TaskAt(cell);
  return t.stride >= stride_.lo - kBoundEps &&
         t.stride <= stride_.hi + kBoundEps &&
         t.incline >= incline_.lo - kBoundEps &&
         t.incline <= incline_.hi + kBoundEps;
}

void TaskGrid::Activate(const Cell& cell) {
  if (!InBounds(cell)) {
    throw std::invalid_argument("TaskGrid::Activate: cell out of bounds");
  }
  active_.insert(cell);
}

void TaskGrid::SetSuccess(const Cell& cell, bool ok) {
  if (active_.count(cell) == 0) {
    throw std::invalid_argument("TaskGrid::SetSuccess: inactive cell");
  }
  success_[cell] = ok;
}

std::vector<Cell> TaskGrid::CellsInRange(const TaskGrid& grid,
                                         double stride_lo, double stride_hi,
                                         double incline_lo,
                                         double incline_hi) {
  const int i0 = static_cast<int>(std::ceil(stride_lo / grid.stride_.step - kBoundEps));
  const int i1 = static_cast<int>(std::floor(stride_hi / grid.stride_.step + kBoundEps));
  const int j0 = static_cast<int>(std::ceil(incline_lo / grid.incline_.step - kBoundEps));
  const int j1 = static_cast<int>(std::floor(incline_hi / grid.incline_.step + kBoundEps));
  std::vector<Cell> cells;
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) {
      if (grid.InBounds({i, j})) cells.emplace_back(i, j);
    }
  }
  return cells;
}

bool TaskGrid::operator==(const TaskGrid& o) const {
  return stride_.step == o.stride_.step && stride_.lo == o.stride_.lo &&
         stride_.hi == o.stride_.hi && incline_.step == o.incline_.step &&
         incline_.lo == o.incline_.lo && incline_.hi == o.incline_.hi &&
         active_ == o.active_ && success_ == o.success_;
}

int NumSampledTasks(int grid_size, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("NumSampledTasks: rho must be in (0, 1]");
  }
  const int n = static_cast<int>(std::floor(rho * grid_size + 1e-9));
  return std::clamp(n, 1, std::max(1, grid_size));
}

std::vector<Cell> SampleTaskCells(const TaskGrid& grid, double rho,
                                  std::mt19937_64& rng) {
  if (grid.size() == 0) {
    throw std::invalid_argument("SampleTaskCells: empty task grid");
  }
  std::vector<Cell> pool(grid.active().begin(), grid.active().end());
  const int n = NumSampledTasks(grid.size(), rho);
  // Partial Fisher-Yates.
  for (int k = 0; k < n; ++k) {
    std::uniform_int_distribution<int> pick(k, static_cast<int>(pool.size()) - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(n);
  return pool;
}

std::vector<Task> SampleTasks(const TaskGrid& grid, double rho,
                              std::mt19937_64& rng) {
  std::vector<Task> tasks;
  for (const Cell& c : SampleTaskCells(grid, rho, rng)) {
    tasks.push_back(grid.TaskAt(c));
  }
  return tasks;
}

TaskGrid CurriculumExpand(const TaskGrid& grid) {
  TaskGrid out = grid;
  for (const auto& [cell, ok] : grid.success()) {
    if (!ok || grid.active().count(cell) == 0) continue;
    const Cell neighbours[] = {{cell.first - 1, cell.second},
                               {cell.first + 1, cell.second},
                               {cell.first, cell.second - 1},
                               {cell.first, cell.second + 1}};
    for (const Cell& nb : neighbours) {
      if (grid.InBounds(nb)) out.Activate(nb);
    }
  }
  return out;
}

}  // namespace romshaper
