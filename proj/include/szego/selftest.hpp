#pragma once

#include "szego/report.hpp"

namespace szego {

/// Fast smoke suite over every module; returns a named pass/fail table.
Json run_selftest();

}  // namespace szego
