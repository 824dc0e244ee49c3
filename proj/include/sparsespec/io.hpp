#pragma once
#include <string>
#include <vector>

#include "sparsespec/approx.hpp"
#include "sparsespec/degree_stats.hpp"
#include "sparsespec/experiments.hpp"

namespace sparsespec {

std::string format_double(double v);  // %.17g, shared by all emitters

void write_figure1_csv(const std::vector<Figure1Row>& rows, const std::string& path);
void write_residual_rows_csv(const std::vector<ResidualRow>& rows, const std::string& path);

} // namespace sparsespec
