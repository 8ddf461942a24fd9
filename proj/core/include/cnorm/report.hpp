#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cnorm/eval.hpp"
#include "cnorm/experiment.hpp"

namespace cnorm {

/// Aligned text: predicted classes as rows, actual classes as columns, row
/// totals with P2, column totals, a P1 row, then raw and adjusted scores.
/// Percentages are printed to one decimal.
void print_matrix_report(std::ostream& out, const ConfusionMatrix& cm, const std::string& title = {});

/// One line per result: method, classifier, missing policy, parameters,
/// raw and adjusted score.
void print_results_table(std::ostream& out, const std::vector<ExperimentResult>& results);

/// Machine-readable results at full precision.
void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& results);

void print_comparison(std::ostream& out, const MethodComparison& mc);

void print_combination(std::ostream& out, const ConfusionMatrix& cm, const std::vector<ClassId>& predictions,
                       const Combination& c);

/// Fixed one-decimal formatting used by every text report.
std::string fixed1(double v);

}  // namespace cnorm
