#pragma once

#include <string>
#include <vector>

#include "cwkb/geometry.hpp"

namespace cwkb {

/* Uniform increasing axis described by its sample positions. */
std::vector<double> make_axis(double min, double max, int n);
void validate_axis(const std::vector<double>& axis, const char* name);

/* Chord-function samples chi(y_p, y_q) at one time, row-major in y_p. */
struct ChordGrid {
    std::vector<double> yp_axis;
    std::vector<double> yq_axis;
    std::vector<complexd> samples;  // [i_p * n_q + i_q]
    double hbar{1.0};
    double t{0.0};

    std::size_t np() const { return yp_axis.size(); }
    std::size_t nq() const { return yq_axis.size(); }
    complexd& at(std::size_t ip, std::size_t iq) { return samples[ip * nq() + iq]; }
    const complexd& at(std::size_t ip, std::size_t iq) const { return samples[ip * nq() + iq]; }

    void validate() const;
    double yp_step() const { return yp_axis.size() > 1 ? yp_axis[1] - yp_axis[0] : 0.0; }
    double yq_step() const { return yq_axis.size() > 1 ? yq_axis[1] - yq_axis[0] : 0.0; }
};

/* Wigner-function samples W(p, q) at one time, row-major in p.
   residual_imag records the largest imaginary part discarded when the
   samples were produced by a chord transform. */
struct WignerGrid {
    std::vector<double> p_axis;
    std::vector<double> q_axis;
    std::vector<double> samples;  // [i_p * n_q + i_q]
    double hbar{1.0};
    double t{0.0};
    double residual_imag{0.0};

    std::size_t np() const { return p_axis.size(); }
    std::size_t nq() const { return q_axis.size(); }
    double& at(std::size_t ip, std::size_t iq) { return samples[ip * nq() + iq]; }
    const double& at(std::size_t ip, std::size_t iq) const { return samples[ip * nq() + iq]; }
};

/* Discrete chord-to-Wigner transform,
     W(x) = (2 pi hbar)^{-2} int exp(+i x.y / hbar) chi(y) d^2 y,
   on the FFT-dual centred grid (n_p x n_q preserved). The chord samples
   must decay below 1e-10 of the grid maximum on the boundary, otherwise a
   SupportError is raised. */
WignerGrid chord_to_wigner(const ChordGrid& grid);

/* Inverse transform chi(y) = int exp(-i x.y / hbar) W(x) d^2 x. */
ChordGrid wigner_to_chord(const WignerGrid& grid);

/* Riemann-sum purity (1 / 2 pi hbar) int |chi|^2 d^2 y. */
double purity(const ChordGrid& grid);

/* File output. Format "csv" writes the exact header
   y_p,y_q,t,re,im,abs,phase (phase in (-pi, pi]) with rows ordered y_p-major;
   "json" mirrors the same data with axes plus a metadata object (the
   metadata argument must be a serialised JSON object). 17 significant
   digits throughout; JSON numbers round-trip bit-exactly. */
void write_grid(const ChordGrid& grid, const std::string& path, const std::string& format,
                const std::string& metadata_json = "{}");
void write_grid(const WignerGrid& grid, const std::string& path, const std::string& format,
                const std::string& metadata_json = "{}");

/* Read back a chord grid written in JSON format. */
ChordGrid read_chord_grid_json(const std::string& path);

}  // namespace cwkb
