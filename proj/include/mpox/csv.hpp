#pragma once

#include <string>

#include "mpox/analysis.hpp"
#include "mpox/simulator.hpp"

namespace mpox {

// Full-precision decimal scientific notation; 17 significant digits round-trip
// any double exactly.
std::string fmt_sci(double v);

// All writers throw std::runtime_error naming the path when the file cannot
// be written. Headers are part of the documented schema.

// header: t,S_h,I_h,Q_h,R_h,S_r,I_r
void write_path_csv(const std::string& path, const PathRecord& record);

// header: t,mark
void write_events_csv(const std::string& path, const EventLog& log);

// pooled events from several logs of the same channel, ordered by time
void write_pooled_events_csv(const std::string& path, const std::vector<const EventLog*>& logs);

// header: t,S_h,I_h,Q_h,R_h,S_r,I_r (means across paths on the regular grid)
void write_mean_csv(const std::string& path, const MeanPath& mean);

// header: x,y,r0 ; rows iterate x outer, y inner
void write_grid_csv(const std::string& path, const GridScan& scan);

// header: x,y
void write_contour_csv(const std::string& path, const GridScan& scan);

} // namespace mpox
