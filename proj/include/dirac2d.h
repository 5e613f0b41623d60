/* dirac2d: solver library for the 2D Helmholtz / TM Maxwell transmission
 * problem based on the Dirac boundary integral equation, with built-in
 * diagnostics (condition sweeps, well-posedness tests, spectral formulas)
 * and an analytic disk oracle.
 *
 * C API: opaque handles, status codes, no exceptions across the boundary.
 * All functions returning d2d_status set a thread-local message retrievable
 * with d2d_last_error() on failure.
 */
#ifndef DIRAC2D_H
#define DIRAC2D_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    D2D_OK = 0,
    D2D_ERR_INVALID_ARGUMENT = 1,
    D2D_ERR_DOMAIN = 2,
    D2D_ERR_SINGULAR = 3,
    D2D_ERR_NO_CONVERGENCE = 4,
    D2D_ERR_IO = 5,
    D2D_ERR_INTERNAL = 6
} d2d_status;

typedef struct {
    double re, im;
} d2d_complex;

typedef struct d2d_curve d2d_curve;
typedef struct d2d_mesh d2d_mesh;
typedef struct d2d_system d2d_system;
typedef struct d2d_solution d2d_solution;
typedef struct d2d_sweep d2d_sweep;
typedef struct d2d_grid d2d_grid;

const char* d2d_version(void);
const char* d2d_last_error(void);

/* ---- curves and meshes ---- */
d2d_status d2d_curve_circle(double radius, d2d_curve** out);
d2d_status d2d_curve_starfish(int arms, double amplitude, d2d_curve** out);
d2d_status d2d_curve_teardrop(double opening_angle, d2d_curve** out);
void d2d_curve_free(d2d_curve* c);

/* dyadic_levels = 0: no grading; > 0: dyadic refinement toward corners */
d2d_status d2d_mesh_create(const d2d_curve* c, int n_panels, int dyadic_levels,
                           d2d_mesh** out);
void d2d_mesh_free(d2d_mesh* m);
int d2d_mesh_nodes(const d2d_mesh* m);
int d2d_mesh_panels(const d2d_mesh* m);

/* ---- parameter matrices (diagonals, frame {1, nu tau, nu, tau}) ---- */
d2d_status d2d_params_2d(d2d_complex k_hat, d2d_complex eps_hat, d2d_complex P[4],
                         d2d_complex Pp[4], d2d_complex N[4], d2d_complex Np[4]);
d2d_status d2d_params_3d(d2d_complex k_hat, d2d_complex eps_hat, d2d_complex P[8],
                         d2d_complex Pp[8], d2d_complex N[8], d2d_complex Np[8]);

/* ---- closed-form diagnostics ---- */
d2d_status d2d_wp_contains(d2d_complex z, d2d_complex k_minus, d2d_complex k_plus,
                           int* contains);
d2d_status d2d_figure_eight(double xi, double delta, d2d_complex* branch_plus,
                            d2d_complex* branch_minus);

/* ---- assembly, solves, fields ---- */
d2d_status d2d_system_assemble(d2d_complex k_minus, d2d_complex k_hat,
                               d2d_complex eps_hat, const d2d_mesh* m,
                               d2d_system** out);
void d2d_system_free(d2d_system* s);
/* binary export: magic "D2DM", u32 dtype tag, u32 rows, u32 cols, row-major
 * complex doubles */
d2d_status d2d_system_export_matrix(const d2d_system* s, const char* path);
d2d_status d2d_system_cond(const d2d_system* s, double* cond2, double* sigma_min);

/* Solve with an incident plane wave. use_gmres = 0: dense LU;
 * 1: unrestarted GMRES at gmres_tol (<= 0 means machine epsilon).
 * gmres_iters may be NULL; set to 0 for the direct path. */
d2d_status d2d_solve_plane_wave(const d2d_system* s, double dir_x, double dir_y,
                                int use_gmres, double gmres_tol, d2d_solution** out,
                                int* gmres_iters);
void d2d_solution_free(d2d_solution* s);

int d2d_solution_size(const d2d_solution* s); /* 4N */
d2d_status d2d_solution_density(const d2d_solution* s, d2d_complex* h);
d2d_status d2d_solution_traces(const d2d_solution* s, d2d_complex* h_plus,
                               d2d_complex* h_minus);
/* interior != 0 evaluates U+ (wavenumber k+), else the scattered U-. */
d2d_status d2d_solution_eval_u(const d2d_solution* s, const double* xy, int npts,
                               int interior, d2d_complex* u);
d2d_status d2d_solution_eval_grad_u(const d2d_solution* s, const double* xy, int npts,
                                    int interior, d2d_complex* du); /* 2 per point */
d2d_status d2d_solution_jump_residual(const d2d_solution* s, double* value_jump,
                                      double* deriv_jump);
d2d_status d2d_solution_write_density_csv(const d2d_solution* s, const char* path);
d2d_status d2d_solution_corner_fit(const d2d_solution* s, d2d_complex* eta_a,
                                   double* residual_a, d2d_complex* eta_b,
                                   double* residual_b);

d2d_status d2d_solution_grid(const d2d_solution* s, double xmin, double xmax,
                             double ymin, double ymax, int nx, int ny, int gradient,
                             d2d_grid** out);
void d2d_grid_free(d2d_grid* g);
d2d_status d2d_grid_write(const d2d_grid* g, const char* base_path, int also_csv);
/* max |U - oracle| off/inside the one-panel collar; circle scenes only */
d2d_status d2d_grid_error_vs_disk_oracle(const d2d_grid* g, const d2d_solution* s,
                                         double* max_err_far, double* max_err_collar);

/* ---- plasmonic homotopy path (eps target on the negative real axis) ---- */
/* reverse_branch != 0: hold the (real) interior wavenumber fixed and take
 * khat = -sqrt(eps) (the reverse plasmonic path); use_direct != 0 solves each
 * path step with a dense LU instead of warm-started GMRES. */
d2d_status d2d_solve_homotopy(const d2d_mesh* m, d2d_complex k_minus,
                              double eps_hat_target, double dir_x, double dir_y,
                              int steps, double delta0, double ratio,
                              int reverse_branch, int use_direct,
                              d2d_solution** out, double* probe_diffs, int* n_diffs);

/* ---- condition-number sweeps ---- */
/* material_case: 0 positive dielectric, 1 plasmonic, 2 reverse plasmonic,
 * 3 custom (k_hat/eps_hat used only then) */
d2d_status d2d_sweep_run(const d2d_curve* c, int material_case, d2d_complex k_hat,
                         d2d_complex eps_hat, double k_max, int n_samples,
                         int n_panels, d2d_sweep** out);
void d2d_sweep_free(d2d_sweep* s);
int d2d_sweep_count(const d2d_sweep* s);
int d2d_sweep_flag_count(const d2d_sweep* s);
d2d_status d2d_sweep_record(const d2d_sweep* s, int i, d2d_complex* k_minus,
                            double* cond2, double* sigma_min, int* flag);
d2d_status d2d_sweep_write_csv(const d2d_sweep* s, const char* path);

/* ---- built-in invariant suite ---- */
/* Writes a JSON report when report_path != NULL. inject_fault != 0 flips a
 * sign in row 2 of the Cauchy operator assembly (testing hook); the
 * projection check must then fail. */
d2d_status d2d_selftest(const char* report_path, int inject_fault, int* n_failed);

/* ---- analytic disk oracle (for external verification) ---- */
d2d_status d2d_disk_oracle_eval(double radius, d2d_complex k_minus, d2d_complex k_hat,
                                d2d_complex eps_hat, double dir_x, double dir_y,
                                int order, const double* xy, int npts, int interior,
                                d2d_complex* u);

#ifdef __cplusplus
}
#endif

#endif /* DIRAC2D_H */
