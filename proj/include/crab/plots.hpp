#ifndef CRAB_PLOTS_HPP
#define CRAB_PLOTS_HPP

#include <string>

namespace crab {

// Renders the three figure families from the CSV outputs found in in_dir
// (summary_*.csv and trends_*.csv): micro-F1 vs labeled size, selected-batch
// MeanIR vs iteration, and the hard / negative-conflict pool trends. Each
// family gets one SVG and one plain data file holding exactly the plotted
// series. Returns the number of figures written; 0 with a warning on stderr
// when nothing plottable exists.
int emit_plots(const std::string& in_dir, const std::string& out_dir);

} // namespace crab

#endif
