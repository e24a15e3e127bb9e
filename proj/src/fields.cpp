#include "diskflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace diskflow {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void PhysParams::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(gamma))
        throw ConfigError("physical parameters must be finite");
    if (gamma <= 2.0)
        throw ConfigError("gamma = " + fmt_double(gamma) + " rejected: requires gamma > 2");
}

void SolverParams::validate(const PhysParams& phys, bool nonlinear) const {
    phys.validate();
    const double rho_cap = std::min(phys.gamma, 3.0);
    if (!(rho > 2.0) || !(rho <= rho_cap))
        throw ConfigError("rho = " + fmt_double(rho) +
                          " rejected: requires 2 < rho <= min(gamma, 3) = " + fmt_double(rho_cap));
    if (nonlinear && rho >= 3.0)
        throw ConfigError("rho = 3 admits only logarithmic decay control; the nonlinear "
                          "solver requires rho < 3 (verification modes accept rho = 3)");
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    if (m_nodes < 16) throw ConfigError("m_nodes must be >= 16");
    if (!(r_max >= 100.0)) throw ConfigError("r_max must be >= 100");
    if (!(quad_tol > 0.0)) throw ConfigError("quad_tol must be positive");
    if (!(picard_tol > 0.0)) throw ConfigError("picard_tol must be positive");
    if (picard_max_iter < 1) throw ConfigError("picard_max_iter must be >= 1");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
}

RadialGrid::RadialGrid(double r_max, int m_nodes) {
    if (!(r_max > 1.0) || m_nodes < 2)
        throw ConfigError("radial grid needs r_max > 1 and at least two nodes");
    log_step_ = std::log(r_max) / (m_nodes - 1);
    nodes_.resize(m_nodes);
    for (int i = 0; i < m_nodes; ++i) nodes_[i] = std::exp(log_step_ * i);
    nodes_.front() = 1.0;
    nodes_.back() = r_max;
}

int RadialGrid::interval_index(double r) const {
    if (!(r >= nodes_.front() * (1.0 - 1e-12)) || !(r <= nodes_.back() * (1.0 + 1e-12)))
        throw NumericalError("radius " + fmt_double(r) + " outside grid [1, " +
                             fmt_double(nodes_.back()) + "]");
    int i = static_cast<int>(std::floor(std::log(std::max(r, 1.0)) / log_step_));
    return std::clamp(i, 0, size() - 2);
}

bool RadialGrid::compatible_with(const RadialGrid& other) const {
    return size() == other.size() && r_max() == other.r_max();
}

const ModeVector& FieldExpansion::mode(int n) const {
    auto it = modes_.find(n);
    if (it == modes_.end())
        throw NumericalError("expansion has no mode n = " + std::to_string(n));
    return it->second;
}

void FieldExpansion::set_mode(ModeVector mv) {
    const size_t m = static_cast<size_t>(grid_.size());
    if (mv.vr.size() != m || mv.vtheta.size() != m)
        throw NumericalError("mode profile length does not match the grid");
    modes_[mv.n] = std::move(mv);
}

ModeVector& FieldExpansion::ensure_mode(int n) {
    auto it = modes_.find(n);
    if (it == modes_.end()) {
        ModeVector mv;
        mv.n = n;
        mv.vr.assign(grid_.size(), cplx(0.0));
        mv.vtheta.assign(grid_.size(), cplx(0.0));
        it = modes_.emplace(n, std::move(mv)).first;
    }
    return it->second;
}

std::vector<int> FieldExpansion::mode_numbers() const {
    std::vector<int> out;
    out.reserve(modes_.size());
    for (const auto& [n, mv] : modes_) out.push_back(n);
    return out;
}

double FieldExpansion::conjugate_symmetry_defect() const {
    double defect = 0.0;
    for (const auto& [n, mv] : modes_) {
        const ModeVector* partner = nullptr;
        auto it = modes_.find(-n);
        if (it != modes_.end()) partner = &it->second;
        for (int i = 0; i < grid_.size(); ++i) {
            const cplx pr = partner ? partner->vr[i] : cplx(0.0);
            const cplx pt = partner ? partner->vtheta[i] : cplx(0.0);
            defect = std::max(defect, std::abs(pr - std::conj(mv.vr[i])));
            defect = std::max(defect, std::abs(pt - std::conj(mv.vtheta[i])));
        }
    }
    return defect;
}

ModeVector project_mode(const FieldSampler& sampler, int n, const RadialGrid& grid,
                        int n_quad) {
    if (n_quad <= 0) n_quad = std::max(64, 8 * (std::abs(n) + 2));
    ModeVector out;
    out.n = n;
    out.vr.assign(grid.size(), cplx(0.0));
    out.vtheta.assign(grid.size(), cplx(0.0));

    const double dtheta = 2.0 * std::numbers::pi / n_quad;
    std::vector<double> cth(n_quad), sth(n_quad);
    std::vector<cplx> phase(n_quad);
    for (int k = 0; k < n_quad; ++k) {
        const double th = dtheta * k;
        cth[k] = std::cos(th);
        sth[k] = std::sin(th);
        phase[k] = std::polar(1.0, -n * th);
    }

    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.r(i);
        cplx acc_r(0.0), acc_t(0.0);
        for (int k = 0; k < n_quad; ++k) {
            const auto u = sampler(r, dtheta * k);
            if (!std::isfinite(u[0]) || !std::isfinite(u[1]))
                throw NumericalError("non-finite sample at r = " + fmt_double(r) +
                                     ", theta = " + fmt_double(dtheta * k));
            const double ur = u[0] * cth[k] + u[1] * sth[k];
            const double ut = -u[0] * sth[k] + u[1] * cth[k];
            acc_r += ur * phase[k];
            acc_t += ut * phase[k];
        }
        out.vr[i] = acc_r / static_cast<double>(n_quad);
        out.vtheta[i] = acc_t / static_cast<double>(n_quad);
    }
    return out;
}

namespace {

// Geometric interpolation of a complex profile between adjacent nodes:
// exact for A r^mu when the endpoint ratio is well-conditioned, linear
// in t = log r otherwise.
cplx interp_profile(const std::vector<cplx>& w, int i, double frac) {
    const cplx a = w[i], b = w[i + 1];
    if (a != cplx(0.0) && b != cplx(0.0)) {
        const cplx ratio = b / a;
        const double mag = std::abs(ratio);
        if (mag > 0.02 && mag < 50.0 && std::abs(std::arg(ratio)) < 2.0)
            return a * std::exp(frac * std::log(ratio));
    }
    return a + frac * (b - a);
}

} // namespace

std::array<double, 2> synthesize(const FieldExpansion& e, double r, double theta) {
    const RadialGrid& grid = e.grid();
    const int i = grid.interval_index(r);
    const double frac = (std::log(r) - grid.t(i)) / grid.log_step();

    cplx ur(0.0), ut(0.0);
    for (int n : e.mode_numbers()) {
        const ModeVector& mv = e.mode(n);
        const cplx ph = std::polar(1.0, n * theta);
        ur += interp_profile(mv.vr, i, frac) * ph;
        ut += interp_profile(mv.vtheta, i, frac) * ph;
    }
    const double c = std::cos(theta), s = std::sin(theta);
    return {ur.real() * c - ut.real() * s, ur.real() * s + ut.real() * c};
}

std::vector<cplx> radial_derivative(const RadialGrid& grid, const std::vector<cplx>& w) {
    const int m = grid.size();
    if (static_cast<int>(w.size()) != m)
        throw NumericalError("profile length does not match the grid");
    if (m < 3) throw NumericalError("derivative stencil needs at least 3 nodes");
    std::vector<cplx> d(m);
    auto x = [&](int i) { return grid.r(i); };
    // three-point stencil on the non-uniform node spacing
    for (int i = 1; i + 1 < m; ++i) {
        const double hm = x(i) - x(i - 1), hp = x(i + 1) - x(i);
        d[i] = (-hp / (hm * (hm + hp))) * w[i - 1] + ((hp - hm) / (hm * hp)) * w[i] +
               (hm / (hp * (hm + hp))) * w[i + 1];
    }
    {
        const double h0 = x(1) - x(0), h1 = x(2) - x(1);
        d[0] = (-(2 * h0 + h1) / (h0 * (h0 + h1))) * w[0] + ((h0 + h1) / (h0 * h1)) * w[1] +
               (-h0 / (h1 * (h0 + h1))) * w[2];
        const double g1 = x(m - 2) - x(m - 3), g0 = x(m - 1) - x(m - 2);
        d[m - 1] = (g0 / (g1 * (g0 + g1))) * w[m - 3] + (-(g0 + g1) / (g1 * g0)) * w[m - 2] +
                   ((2 * g0 + g1) / (g0 * (g0 + g1))) * w[m - 1];
    }
    return d;
}

ModeScalar rot_mode(const ModeVector& v, const RadialGrid& grid) {
    const int m = grid.size();
    std::vector<cplx> rvt(m);
    for (int i = 0; i < m; ++i) rvt[i] = grid.r(i) * v.vtheta[i];
    auto d = radial_derivative(grid, rvt);
    ModeScalar out;
    out.n = v.n;
    out.values.resize(m);
    const cplx in(0.0, static_cast<double>(v.n));
    for (int i = 0; i < m; ++i)
        out.values[i] = d[i] / grid.r(i) - in * v.vr[i] / grid.r(i);
    return out;
}

ModeScalar div_mode(const ModeVector& v, const RadialGrid& grid) {
    const int m = grid.size();
    std::vector<cplx> rvr(m);
    for (int i = 0; i < m; ++i) rvr[i] = grid.r(i) * v.vr[i];
    auto d = radial_derivative(grid, rvr);
    ModeScalar out;
    out.n = v.n;
    out.values.resize(m);
    const cplx in(0.0, static_cast<double>(v.n));
    for (int i = 0; i < m; ++i)
        out.values[i] = d[i] / grid.r(i) + in * v.vtheta[i] / grid.r(i);
    return out;
}

double weighted_sup_norm(const ModeScalar& f, double s, const RadialGrid& grid) {
    double sup = 0.0;
    for (int i = 0; i < grid.size(); ++i)
        sup = std::max(sup, std::pow(grid.r(i), s) * std::abs(f.values[i]));
    return sup;
}

double weighted_sup_norm(const ModeVector& v, double s, const RadialGrid& grid) {
    double sup = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double mag = std::hypot(std::abs(v.vr[i]), std::abs(v.vtheta[i]));
        sup = std::max(sup, std::pow(grid.r(i), s) * mag);
    }
    return sup;
}

double grad_weighted_sup_norm(const ModeVector& v, double s, const RadialGrid& grid) {
    const auto dvr = radial_derivative(grid, v.vr);
    const auto dvt = radial_derivative(grid, v.vtheta);
    const cplx in(0.0, static_cast<double>(v.n));
    double sup = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.r(i);
        const double ang = std::norm(in * v.vr[i] - v.vtheta[i]) +
                           std::norm(v.vr[i] + in * v.vtheta[i]);
        const double mag =
            std::sqrt(std::norm(dvr[i]) + std::norm(dvt[i]) + ang / (r * r));
        sup = std::max(sup, std::pow(r, s) * mag);
    }
    return sup;
}

double l1_weighted_norm(const FieldExpansion& e, double s) {
    double sum = 0.0;
    for (int n : e.mode_numbers()) sum += weighted_sup_norm(e.mode(n), s, e.grid());
    return sum;
}

double xrho_norm(const FieldExpansion& e, double rho) {
    double sum = l1_weighted_norm(e, rho - 1.0);
    for (int n : e.mode_numbers()) sum += grad_weighted_sup_norm(e.mode(n), rho, e.grid());
    return sum;
}

namespace {

DecayFit fit_loglog(const RadialGrid& grid, const std::vector<double>& absvals,
                    double r_lo, double r_hi) {
    DecayFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.r(i);
        if (r < r_lo || r > r_hi) continue;
        if (!(absvals[i] > 0.0)) continue;
        const double x = std::log(r), y = std::log(absvals[i]);
        pts.emplace_back(x, y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.n_points = static_cast<int>(pts.size());
    if (fit.n_points < 3) throw NumericalError("decay fit window contains fewer than 3 usable nodes");
    const double nn = fit.n_points;
    const double denom = nn * sxx - sx * sx;
    fit.slope = (nn * sxy - sx * sy) / denom;
    const double icept = (sy - fit.slope * sx) / nn;
    double ss = 0.0;
    for (auto [x, y] : pts) {
        const double e = y - (icept + fit.slope * x);
        ss += e * e;
    }
    fit.rms_residual = std::sqrt(ss / nn);
    return fit;
}

} // namespace

DecayFit fit_decay_slope(const RadialGrid& grid, const std::vector<double>& magnitudes,
                         double r_lo, double r_hi) {
    return fit_loglog(grid, magnitudes, r_lo, r_hi);
}

DecayFit fit_decay_slope(const RadialGrid& grid, const std::vector<cplx>& values,
                         double r_lo, double r_hi) {
    std::vector<double> mag(values.size());
    for (size_t i = 0; i < values.size(); ++i) mag[i] = std::abs(values[i]);
    return fit_loglog(grid, mag, r_lo, r_hi);
}

ModeVector background_mode(const PhysParams& phys, const RadialGrid& grid) {
    ModeVector mv;
    mv.n = 0;
    mv.vr.resize(grid.size());
    mv.vtheta.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        mv.vr[i] = -phys.gamma / grid.r(i);
        mv.vtheta[i] = phys.alpha / grid.r(i);
    }
    return mv;
}

// --- CSV -------------------------------------------------------------------

namespace {

void write_header(std::ostream& os, int n, const PhysParams& phys) {
    os << "# n=" << n << " gamma=" << fmt_double(phys.gamma) << " alpha="
       << fmt_double(phys.alpha) << "\n";
}

} // namespace

void write_mode_csv(std::ostream& os, const ModeScalar& f, const RadialGrid& grid,
                    const PhysParams& phys) {
    write_header(os, f.n, phys);
    os << "r,re,im\n";
    for (int i = 0; i < grid.size(); ++i)
        os << fmt_double(grid.r(i)) << ',' << fmt_double(f.values[i].real()) << ','
           << fmt_double(f.values[i].imag()) << "\n";
}

void write_mode_csv(std::ostream& os, const ModeVector& v, const RadialGrid& grid,
                    const PhysParams& phys) {
    write_header(os, v.n, phys);
    os << "r,re_vr,im_vr,re_vtheta,im_vtheta\n";
    for (int i = 0; i < grid.size(); ++i)
        os << fmt_double(grid.r(i)) << ',' << fmt_double(v.vr[i].real()) << ','
           << fmt_double(v.vr[i].imag()) << ',' << fmt_double(v.vtheta[i].real()) << ','
           << fmt_double(v.vtheta[i].imag()) << "\n";
}

void write_mode_csv(const std::string& path, const ModeScalar& f, const RadialGrid& grid,
                    const PhysParams& phys) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path + " for writing");
    write_mode_csv(os, f, grid, phys);
}

void write_mode_csv(const std::string& path, const ModeVector& v, const RadialGrid& grid,
                    const PhysParams& phys) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path + " for writing");
    write_mode_csv(os, v, grid, phys);
}

namespace {

std::vector<double> split_row(const std::string& line, size_t expected, int lineno) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stod(cell, &pos));
            if (pos != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(lineno) + ": bad numeric cell '" +
                              cell + "'");
        }
    }
    if (out.size() != expected)
        throw ConfigError("line " + std::to_string(lineno) + ": expected " +
                          std::to_string(expected) + " columns, got " +
                          std::to_string(out.size()));
    return out;
}

} // namespace

ModeCsv read_mode_csv(std::istream& is) {
    ModeCsv out;
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty profile file");
    int n = 0;
    double gamma = 0, alpha = 0;
    if (std::sscanf(line.c_str(), "# n=%d gamma=%lf alpha=%lf", &n, &gamma, &alpha) != 3)
        throw ConfigError("malformed profile header: '" + line + "'");
    out.gamma = gamma;
    out.alpha = alpha;

    if (!std::getline(is, line)) throw ConfigError("profile file missing column header");
    size_t cols;
    if (line == "r,re,im") {
        out.is_vector = false;
        cols = 3;
    } else if (line == "r,re_vr,im_vr,re_vtheta,im_vtheta") {
        out.is_vector = true;
        cols = 5;
    } else {
        throw ConfigError("unknown profile column header: '" + line + "'");
    }

    std::vector<double> rs;
    std::vector<cplx> c1, c2;
    int lineno = 2;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto row = split_row(line, cols, lineno);
        rs.push_back(row[0]);
        c1.emplace_back(row[1], row[2]);
        if (out.is_vector) c2.emplace_back(row[3], row[4]);
    }
    if (rs.size() < 2) throw ConfigError("profile file has fewer than 2 rows");

    out.grid = RadialGrid(rs.back(), static_cast<int>(rs.size()));
    for (size_t i = 0; i < rs.size(); ++i)
        if (std::abs(rs[i] - out.grid.r(static_cast<int>(i))) >
            1e-12 * out.grid.r(static_cast<int>(i)))
            throw ConfigError("profile radii are not logarithmically spaced on [1, r_max]");

    if (out.is_vector) {
        out.vector.n = n;
        out.vector.vr = std::move(c1);
        out.vector.vtheta = std::move(c2);
    } else {
        out.scalar.n = n;
        out.scalar.values = std::move(c1);
    }
    return out;
}

ModeCsv read_mode_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open " + path);
    return read_mode_csv(is);
}

} // namespace diskflow
