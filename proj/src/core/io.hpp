#ifndef DIRAC2D_IO_HPP
#define DIRAC2D_IO_HPP

#include <string>

#include "fields.hpp"
#include "solver.hpp"

namespace dirac2d {

/// Provenance stamped into every output file: config digest, parameter
/// triple, mesh summary, code version. Serialized as one JSON object.
struct Provenance {
    std::string config_text;  // hashed into config_hash
    Complex k_minus{}, k_hat{}, eps_hat{};
    std::string shape;
    int n_panels = 0, n_nodes = 0;
    std::string grading;
    std::string extra;  // optional free-form JSON fragment ("key":value,...)
};

std::string provenance_json(const Provenance& p);
uint64_t fnv1a(const std::string& s);

/// Dense complex matrix, binary: magic "D2DM", u32 dtype tag (1 =
/// complex128), u32 rows, u32 cols, then row-major complex doubles.
void write_matrix_bin(const std::string& path, const Matrix& a);
Matrix read_matrix_bin(const std::string& path);

/// Field grid: <base>.json (metadata + provenance) and <base>.bin with the
/// row-major complex-double U payload (gradient appended when present);
/// optionally <base>.csv for small grids.
void write_field_grid(const std::string& base, const FieldGrid& g, const Provenance& p,
                      bool also_csv);

/// Sweep records: '# <provenance json>' comment line, then the CSV header
/// k_minus_re,k_minus_im,cond2,sigma_min,gmres_iters,flag (gmres_iters empty
/// when absent).
void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& recs,
                     const Provenance& p);

/// Density against arclength distance to the corner, both sides.
void write_density_csv(const std::string& path, const Vector& h, const Mesh& mesh,
                       const Provenance& p);

}  // namespace dirac2d

#endif
