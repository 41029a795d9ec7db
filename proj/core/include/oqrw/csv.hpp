#pragma once

#include <map>
#include <string>
#include <vector>

#include "oqrw/analysis.hpp"
#include "oqrw/discrete.hpp"
#include "oqrw/fokker_planck.hpp"
#include "oqrw/sde.hpp"
#include "oqrw/stats.hpp"

namespace oqrw {

/// Fixed CSV schemas shared by every run mode. Doubles are written with
/// "%.17g" so reruns are byte-identical.
///
///   trajectory: t_or_n,x,q1,q2,q3,sqrt_det
///   flips:      trajectory_id,flip_time,direction
///   field:      x,p,q1_density,q2_density,q3_density
///   decay:      t_or_n,mean_sqrt_det,stderr
///   histogram:  x,density[,dirac_weight]
///   xsamples:   t,x_0,...,x_{n-1}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);

void write_flips_csv(const std::string& path,
                     const std::vector<std::pair<std::uint64_t, FlipRecord>>& flips);

void write_field_csv(const std::string& path, const MatrixDensityField& field);

void write_decay_csv(const std::string& path, const DecaySeries& series);

void write_histogram_csv(const std::string& path, const Histogram& hist,
                         double dirac_weight = 0.0, double dirac_pos = 0.0);

void write_xsamples_csv(const std::string& path, const EnsembleX& ens);

EnsembleX read_xsamples_csv(const std::string& path);

std::vector<std::pair<std::uint64_t, FlipRecord>> read_flips_csv(const std::string& path);

std::string format_double(double v);

}  // namespace oqrw
