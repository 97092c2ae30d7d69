#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stripns/function_spaces.hpp"
#include "stripns/grid.hpp"

namespace stripns {

enum class Lemma { poincare, l4, grad_interp, korn, linf };

std::string to_string(Lemma lemma);
Lemma lemma_from_string(const std::string &name);
const std::vector<Lemma> &all_lemmas();

struct InequalityReport {
	Lemma name = Lemma::poincare;
	int ensemble_size = 0;
	int skipped = 0;      // 0/0 members
	double max_ratio = 0.0;
	std::map<double, double> ratios_by_L;
	bool violated = false;
	// korn only: smallest ||D(u)|| / ||u||_H1 and the worst relative defect of
	// int |D(u)|^2 = 1/2 int |grad u|^2
	double min_ratio = 0.0;
	double identity_residual = 0.0;
};

// Streamfunction sum of separable terms X(x) phi(y) with phi(0) = phi(1) = 0,
// X a truncated sine series (either a few global modes or a localized packet
// of fixed physical width), velocity u = curl psi. With robin_projected the
// profile is corrected to satisfy the discrete Navier condition.
VectorField random_admissible_field(const GridSpec &grid, const SlipPair &slip, double mu, std::uint64_t seed,
                                    bool robin_projected = true);

std::vector<VectorField> make_ensemble(const GridSpec &grid, const SlipPair &slip, double mu, std::uint64_t seed,
                                       int size, bool robin_projected = true);

// LHS / RHS for one field. NaN for 0/0, +inf for a vanishing RHS.
double lemma_ratio(Lemma lemma, const VectorField &u, const SlipPair &slip, double mu);

InequalityReport check_poincare(std::span<const VectorField> ensemble);
InequalityReport check_l4(std::span<const VectorField> ensemble);
InequalityReport check_grad_interp(std::span<const VectorField> ensemble, const SlipPair &slip, double mu);
InequalityReport check_korn(std::span<const VectorField> ensemble);
InequalityReport check_linf(std::span<const VectorField> ensemble, const SlipPair &slip, double mu);
InequalityReport check_lemma(Lemma lemma, std::span<const VectorField> ensemble, const SlipPair &slip, double mu);

// Scalar building block: ||f||_L4^2 / (||f|| ||grad f||) for f vanishing on
// x = -L and y = 0; the bound is 2.
double building_block_ratio(const ScalarField &f);
ScalarField random_corner_field(const GridSpec &grid, std::uint64_t seed);
InequalityReport check_building_block(std::span<const ScalarField> ensemble);

struct SweepSettings {
	int ny = 32;
	double aspect = 1.0; // hx / hy
	SlipPair slip{};
	double mu = 1.0;
	bool robin_projected = true;
};

// nx chosen so that hx / hy is close to `aspect` for every L.
GridSpec matched_grid(double L, int ny, double aspect = 1.0);

InequalityReport sweep_L(Lemma lemma, const std::vector<double> &L_values, int ensemble_size, std::uint64_t seed,
                         const SweepSettings &settings = {});

// All five lemmas from one ensemble per L.
std::vector<InequalityReport> sweep_all(const std::vector<double> &L_values, int ensemble_size, std::uint64_t seed,
                                        const SweepSettings &settings = {});

double sweep_spread(const InequalityReport &report); // max over L / min over L

} // namespace stripns
