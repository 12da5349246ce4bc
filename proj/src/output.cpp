#include "chns/output.hpp"

#include "chns/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace chns {

namespace {

void append_g17(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

constexpr const char* kCsvHeader =
    "t,mass_n,mass_v,entropy,fisher_v,quartic_v,kinetic,enstrophy,grad_n_weighted,"
    "F1,F2,l2_dist_n,w1inf_v,w12_u,min_n,max_n,min_v,max_v,div_u_inf,"
    "cum_quartic_v,cum_enstrophy,cum_grad_n\n";

} // namespace

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series) {
    if (series.empty())
        throw std::invalid_argument("diagnostics series is empty");
    std::string out = kCsvHeader;
    for (const DiagnosticsRecord& r : series) {
        const double cols[] = {r.t, r.mass_n, r.mass_v, r.entropy, r.fisher_v, r.quartic_v,
                               r.kinetic, r.enstrophy, r.grad_n_weighted, r.f1, r.f2,
                               r.l2_dist_n, r.w1inf_v, r.w12_u, r.min_n, r.max_n, r.min_v,
                               r.max_v, r.div_u_inf, r.cum_quartic_v, r.cum_enstrophy,
                               r.cum_grad_n};
        bool first = true;
        for (double c : cols) {
            if (!first)
                out += ',';
            append_g17(out, c);
            first = false;
        }
        out += '\n';
    }
    return out;
}

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& series, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open " + path + " for writing");
    const std::string body = diagnostics_csv(series);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f)
        throw IoError("write failed: " + path);
}

void write_snapshot(const SimState& state, const std::string& path) {
    const GridSpec& g = state.n.grid;
    std::string out;
    out += "# vtk DataFile Version 3.0\n";
    out += "t=";
    append_g17(out, state.t);
    out += " step=" + std::to_string(state.step_count) + "\n";
    out += "ASCII\n";
    out += "DATASET STRUCTURED_POINTS\n";
    out += "DIMENSIONS " + std::to_string(g.nx) + " " + std::to_string(g.ny) + " 1\n";
    out += "ORIGIN ";
    append_g17(out, 0.5 * g.hx);
    out += " ";
    append_g17(out, 0.5 * g.hy);
    out += " 0\n";
    out += "SPACING ";
    append_g17(out, g.hx);
    out += " ";
    append_g17(out, g.hy);
    out += " 1\n";
    out += "POINT_DATA " + std::to_string(g.cells()) + "\n";

    auto scalars = [&](const char* name, const ScalarField& f) {
        out += std::string("SCALARS ") + name + " double 1\n";
        out += "LOOKUP_TABLE default\n";
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                append_g17(out, f(i, j));
                out += '\n';
            }
    };
    scalars("n", state.n);
    scalars("v", state.v);
    scalars("P", state.pressure);

    out += "VECTORS u double\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            append_g17(out, 0.5 * (state.u.ux(i, j) + state.u.ux(i + 1, j)));
            out += ' ';
            append_g17(out, 0.5 * (state.u.uy(i, j) + state.u.uy(i, j + 1)));
            out += " 0\n";
        }

    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open " + path + " for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f)
        throw IoError("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open snapshot: " + path);
    std::string line;
    std::getline(f, line); // version comment
    std::getline(f, line); // title: t=<t> step=<k>
    double t = 0.0;
    long step = 0;
    std::sscanf(line.c_str(), "t=%lf step=%ld", &t, &step);
    std::getline(f, line); // ASCII
    std::getline(f, line); // DATASET
    int nx = 0, ny = 0, nz = 0;
    f >> line >> nx >> ny >> nz;
    double ox, oy, oz, hx, hy, hz;
    f >> line >> ox >> oy >> oz;
    f >> line >> hx >> hy >> hz;
    std::size_t npoints = 0;
    f >> line >> npoints;
    if (!f || nx < 4 || ny < 4 || nz != 1)
        throw IoError("malformed snapshot header: " + path);

    Snapshot snap(GridSpec(nx, ny, hx * nx, hy * ny));
    snap.t = t;
    snap.step = step;

    auto read_scalars = [&](ScalarField& dst) {
        std::string kw, name, type;
        int comps;
        f >> kw >> name >> type >> comps;
        f >> kw >> type; // LOOKUP_TABLE default
        for (double& x : dst.data)
            f >> x;
    };
    read_scalars(snap.n);
    read_scalars(snap.v);
    read_scalars(snap.pressure);

    std::string kw, name, type;
    f >> kw >> name >> type;
    for (std::size_t k = 0; k < snap.ucx.data.size(); ++k) {
        double z;
        f >> snap.ucx.data[k] >> snap.ucy.data[k] >> z;
    }
    if (!f)
        throw IoError("malformed snapshot body: " + path);
    return snap;
}

} // namespace chns
