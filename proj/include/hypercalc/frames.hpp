#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hypercalc/expr.hpp"

namespace hypercalc {

enum class Frame { Canonical, SHF, HF };
enum class Signature { PlusMinus, MinusPlus };  // (+,-,...,-) and (-,+,...,+)

std::string frame_name(Frame f);
Frame parse_frame(std::string_view name);

using Matrix = std::vector<std::vector<Expr>>;

Matrix identity_matrix(int dim);
Matrix multiply(const Matrix& a, const Matrix& b);
bool is_identity(const Matrix& m);

/// The two matrices displayed for a frame: Phi with e_alpha = Phi_alpha^beta d_beta
/// and Psi with d_alpha = Psi_alpha^beta e_beta, where e is the SHF or HF basis.
struct FrameMatrices {
  Matrix phi;
  Matrix psi;
};
FrameMatrices basis_matrices(Frame f, int dim);

/// M with (from basis)_alpha = M_alpha^beta (to basis)_beta. Contravariant
/// components then move as T_to^{ab} = M_alpha^a M_beta^b T_from^{alpha beta}.
/// Hence canonical->SHF is Psi (SHF), SHF->canonical is Phi (SHF), and the
/// SHF<->HF pairs compose through the canonical frame.
Matrix transition_matrix(Frame from, Frame to, int dim);

struct TensorComponents {
  int rank = 2;
  int dim = 3;
  Frame frame = Frame::Canonical;
  Signature signature = Signature::PlusMinus;
  std::vector<Expr> entries;  // row-major, (dim+1)^rank

  static TensorComponents zero(int rank, int dim, Frame frame = Frame::Canonical,
                               Signature sig = Signature::PlusMinus);
  static TensorComponents minkowski(int dim, Signature sig = Signature::PlusMinus);

  std::size_t flat(const std::vector<int>& idx) const;
  Expr& at(const std::vector<int>& idx) { return entries[flat(idx)]; }
  const Expr& at(const std::vector<int>& idx) const { return entries[flat(idx)]; }
  bool constant() const;
  bool operator==(const TensorComponents& o) const;
};

/// Multi-index contraction with the transition matrix; ranks 1..3.
TensorComponents transform_components(const TensorComponents& T, Frame target);

/// Certificate for a constant tensor: residual of the contraction polynomial
/// after rewriting xi0^2 -> sum xi_a^2 until deg_xi0 <= 1.
struct NullCertificate {
  bool is_null = false;
  Polynomial residual;  // slot 0 = xi0, slot a = xi_a
  std::string residual_string() const;
};

/// Contraction polynomial T^{ab..} xi_a xi_b .. with slot alpha = xi_alpha.
Polynomial contraction_polynomial(const TensorComponents& T);
Polynomial reduce_on_null_cone(const Polynomial& p, int dim);
/// Throws std::invalid_argument for non-constant entries.
NullCertificate is_null_form(const TensorComponents& T);
/// max |T(xi,...,xi)| over `samples` random xi = (1, omega), |omega| = 1.
double probe_null_cone(const TensorComponents& T, int samples, unsigned long long seed);

/// SHF (0..0) component written as (s/t)^2 * g. For rank 2 and 3 null
/// tensors g is a polynomial in x/t; `check` is t^2 T_00 - s^2 g.
struct GoodComponent {
  Expr shf_component;
  Expr factor;  // (s/t)^2
  Expr g;
  Expr check;
};
/// Throws std::invalid_argument("no good-component guarantee") unless null.
GoodComponent good_component(const TensorComponents& T);

/// (s/t)^k Tbar^{..} where k counts the zero indices; bounded on K by the
/// HF weighting lemma.
std::vector<std::pair<std::vector<int>, Expr>> hf_weighted_components(const TensorComponents& T);

/// Record {rank, dim, signature: "pm"|"mp", frame?, entries: {"00": "1", ...}};
/// omitted entries are zero.
TensorComponents parse_tensor_record(std::string_view json_text);
std::string index_key(const std::vector<int>& idx);

}  // namespace hypercalc
