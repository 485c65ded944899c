#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

// Exact algebra over hybrid CV/DV states. CV modes are kept as explicit
// coherent amplitudes (non-orthogonal; inner products via the coherent
// overlap identity), DV modes as {H, V, vacuum}. Every probability of the
// scheme is a function of coherent-state overlaps only, so this sparse
// representation is exact and cheap — no Fock truncation anywhere.

namespace htqc::oracle {

using cplx = std::complex<double>;

// <beta|gamma> = exp(-(|b|^2+|g|^2)/2 + conj(b) g)
cplx coherent_overlap(cplx beta, cplx gamma);

enum class DvKet : unsigned char { H, V, Vac };

// The 3-element CV basis {|+a>, |-a>, |vac>} with its Gram matrix.
struct CvBasis {
    double amplitude;
    Eigen::Matrix3cd gram() const;
};

struct BasisLabel {
    std::vector<cplx> cv;   // coherent amplitude per CV mode
    std::vector<DvKet> dv;  // polarization per DV mode
};

// <a|b> over all modes
cplx label_overlap(const BasisLabel& a, const BasisLabel& b);

struct HybridTerm {
    cplx coeff;
    BasisLabel label;
};

class HybridState {
  public:
    HybridState(int n_cv, int n_dv) : n_cv_(n_cv), n_dv_(n_dv) {}

    void add_term(cplx coeff, std::vector<cplx> cv, std::vector<DvKet> dv);
    int n_cv() const { return n_cv_; }
    int n_dv() const { return n_dv_; }
    const std::vector<HybridTerm>& terms() const { return terms_; }

    cplx inner(const HybridState& other) const;  // <this|other>
    double norm() const;
    void normalize();

    // logical Pauli on the hybrid qubit (cv_mode, dv_mode); X flips the CV
    // sign and swaps H/V, Z negates the V component
    void apply_x(int cv_mode, int dv_mode);
    void apply_z(int dv_mode);

    // 1:1 beam splitter fan-out: mode's amplitude b becomes (b/sqrt2,
    // b/sqrt2) on modes (mode, mode+1)
    void split_cv(int mode);

  private:
    int n_cv_;
    int n_dv_;
    std::vector<HybridTerm> terms_;
    friend class HybridDensity;
};

class HybridDensity {
  public:
    static HybridDensity from_state(const HybridState& s);

    int n_cv() const { return n_cv_; }
    int n_dv() const { return n_dv_; }
    double trace() const;

    // bosonic loss channel of rate eta
    void apply_cv_loss(int mode, double eta);
    void apply_dv_loss(int mode, double eta);
    void apply_loss(double eta);  // all modes

    // Hermitian matrix in an orthonormalized basis (B rho B^T with
    // B = G^{1/2} over the distinct labels present); used for positivity
    // checks
    Eigen::MatrixXcd physical_matrix() const;

    struct Term {
        cplx coeff;
        BasisLabel ket;
        BasisLabel bra;
    };
    const std::vector<Term>& terms() const { return terms_; }
    std::vector<Term>& terms() { return terms_; }

  private:
    int n_cv_ = 0;
    int n_dv_ = 0;
    std::vector<Term> terms_;
};

enum class HBSMOutcome {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
    BsSuccessPlus,
    BsSuccessMinus,
    Fail
};

// Full outcome distribution of an HBSM on a two-hybrid-qubit state
// (modes: cv 0,1 / dv 0,1; qubit i = (cv i, dv i)). Loss is applied to
// both CV modes and to one DV mode: the closed-form failure rate
// (1+eta)e^{-2a'^2}/2 books the polarization loss of a measurement as a
// single photon-loss event.
std::map<HBSMOutcome, double> hbsm_distribution(const HybridState& state,
                                                double eta);

// |+_L> with the given CV amplitude (1 CV + 1 DV mode).
HybridState plus_logical(double amplitude);

enum class BiClick { H, V, Fail };

struct C3Result {
    HybridState state;      // 3 hybrid qubits, layout (cv i, dv i)
    double success_prob;    // total success probability of the circuit
};

// Runs the offline generation circuit: four input qubits, three beam
// splitters, two CV Bell measurements, one fusion; conditioned on the
// given outcomes. `prime` selects the fusion without the pi/2-rotator,
// which produces the GHZ-form resource state.
C3Result generate_c3(double alpha, HBSMOutcome ba1, HBSMOutcome ba2,
                     BiClick click, bool prime = false);

// Reference resource states (normalized).
HybridState c3_reference(double alpha);
HybridState c3prime_reference(double alpha);

// Pauli correction string ("", "Z3", "X1Z2Z3", ...) for the standard
// resource state, all 32 outcome combinations.
std::string pauli_correction(HBSMOutcome ba1, HBSMOutcome ba2, BiClick click);

// Correction for the rotator-less variant; defined for psi-psi outcome
// pairs.
std::string c3prime_correction(HBSMOutcome ba1, HBSMOutcome ba2,
                               BiClick click);

// Applies a correction string to a 3-qubit state with layout (cv i, dv i).
void apply_pauli_string(HybridState& s, const std::string& pauli);

struct BaChannelReport {
    Eigen::Matrix4d placement1;  // magnitudes, logical 2-qubit basis
    Eigen::Matrix4d placement2;
    double w_ii, w_zi, w_iz, w_zz;  // Pauli weights of the equal mixture
};

// Dephasing channel induced on the two neighbor qubits by a lossy CV Bell
// measurement, for both placements of the Hadamard-side input.
BaChannelReport ba_induced_channel(double eta, double alpha);

// Loss-tolerance checks: the logical block of the post-measurement state
// must match the lossless measurement applied to the lossy input, i.e.
// the measurement adds no dephasing of its own.
bool verify_bs_losstolerance(double eta);
bool verify_bi_losstolerance(double eta);

}  // namespace htqc::oracle
