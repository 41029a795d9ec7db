#include "oqrw/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oqrw/errors.hpp"

namespace oqrw {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // fixed newlines on any platform
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
    auto f = open_out(path);
    f << "t_or_n,x,q1,q2,q3,sqrt_det\n";
    for (std::size_t i = 0; i < rec.size(); ++i) {
        f << format_double(rec.t_or_n[i]) << ',' << format_double(rec.x[i]) << ','
          << format_double(rec.q1[i]) << ',' << format_double(rec.q2[i]) << ','
          << format_double(rec.q3[i]) << ',' << format_double(rec.sqrt_det[i]) << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

void write_flips_csv(const std::string& path,
                     const std::vector<std::pair<std::uint64_t, FlipRecord>>& flips) {
    auto f = open_out(path);
    f << "trajectory_id,flip_time,direction\n";
    for (const auto& [id, rec] : flips) {
        for (std::size_t i = 0; i < rec.times.size(); ++i) {
            f << id << ',' << format_double(rec.times[i]) << ','
              << static_cast<int>(rec.directions[i]) << '\n';
        }
    }
    if (!f) throw IoError("write failed: " + path);
}

void write_field_csv(const std::string& path, const MatrixDensityField& field) {
    auto f = open_out(path);
    f << "x,p,q1_density,q2_density,q3_density\n";
    for (std::size_t i = 0; i < field.grid.n_cells; ++i) {
        f << format_double(field.grid.center(i)) << ',' << format_double(field.p[i]) << ','
          << format_double(field.w1[i]) << ',' << format_double(field.w2[i]) << ','
          << format_double(field.w3[i]) << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

void write_decay_csv(const std::string& path, const DecaySeries& series) {
    auto f = open_out(path);
    f << "t_or_n,mean_sqrt_det,stderr\n";
    for (std::size_t i = 0; i < series.n.size(); ++i) {
        f << format_double(series.n[i]) << ',' << format_double(series.mean[i]) << ','
          << format_double(series.stderr_[i]) << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

void write_histogram_csv(const std::string& path, const Histogram& hist, double dirac_weight,
                         double dirac_pos) {
    auto f = open_out(path);
    f << "x,density,dirac_weight\n";
    for (std::size_t i = 0; i < hist.density.size(); ++i) {
        double dw = 0.0;
        if (dirac_weight > 0.0 && dirac_pos >= hist.edges[i] && dirac_pos < hist.edges[i + 1])
            dw = dirac_weight;
        f << format_double(hist.center(i)) << ',' << format_double(hist.density[i]) << ','
          << format_double(dw) << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

void write_xsamples_csv(const std::string& path, const EnsembleX& ens) {
    auto f = open_out(path);
    f << "t";
    for (std::size_t i = 0; i < ens.x.size(); ++i) f << ",x_" << i;
    f << '\n';
    for (std::size_t j = 0; j < ens.times.size(); ++j) {
        f << format_double(ens.times[j]);
        for (std::size_t i = 0; i < ens.x.size(); ++i) f << ',' << format_double(ens.x[i][j]);
        f << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

EnsembleX read_xsamples_csv(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw IoError("empty xsamples file: " + path);
    std::size_t n_traj = 0;
    for (char c : line)
        if (c == ',') ++n_traj;
    EnsembleX ens;
    ens.x.resize(n_traj);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        if (!std::getline(ss, tok, ',')) throw IoError("malformed xsamples row in " + path);
        ens.times.push_back(std::stod(tok));
        for (std::size_t i = 0; i < n_traj; ++i) {
            if (!std::getline(ss, tok, ',')) throw IoError("short xsamples row in " + path);
            ens.x[i].push_back(std::stod(tok));
        }
    }
    return ens;
}

std::vector<std::pair<std::uint64_t, FlipRecord>> read_flips_csv(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    std::getline(f, line);  // header
    std::vector<std::pair<std::uint64_t, FlipRecord>> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id_s, t_s, d_s;
        if (!std::getline(ss, id_s, ',') || !std::getline(ss, t_s, ',') ||
            !std::getline(ss, d_s, ','))
            throw IoError("malformed flips row in " + path);
        std::uint64_t id = std::stoull(id_s);
        if (out.empty() || out.back().first != id) out.push_back({id, FlipRecord{}});
        out.back().second.times.push_back(std::stod(t_s));
        out.back().second.directions.push_back(static_cast<std::int8_t>(std::stoi(d_s)));
    }
    return out;
}

}  // namespace oqrw
