#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "greechie.hpp"
#include "term.hpp"

namespace oml {

enum class family_errc {
  bad_parameter,      // unknown family name or out-of-range parameter
  generator_invalid,  // a generated object failed its own validation
};

class family_error : public std::runtime_error {
 public:
  family_error(family_errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  family_errc code() const { return code_; }

 private:
  family_errc code_;
};

// Identifies one equation or inference family, plus its parameters. The
// textual grammar (used by parse/to_string and the CLI) is:
//
//   oml | modular | distributive
//   noa:N | noa-inference:N | noa-identity:N | oa-transitivity:N   (N >= 3)
//   oa3variant:V                                 (V in a..j)
//   ngo:N | ngo-inference:N                      (N >= 3)
//   godowski-equivalent:V | godowski-equivalent:V,N   (V in c|d|e, N >= 3,
//                                                      default N = 3)
//   godowski-jk:N,J,K                            (N >= 3, 1 <= J,K <= N)
//   godowski-transitivity:I,J                    (I,J >= 1)
//   mge:TEXT                  (condensed state equation, e.g. ad+be+cf=db+ec+fa)
//   mge-derived:K                                (K in 1..4)
//   en:N | eprime:N | e1:N                       (N >= 3)
struct family_id {
  enum class family_kind : std::uint8_t {
    oml_law,
    modular,
    distributive,
    noa,
    noa_inference,
    noa_identity,
    oa_transitivity,
    oa3_variant,
    ngo,
    ngo_inference,
    godowski_equivalent,
    godowski_jk,
    godowski_transitivity,
    mge,
    mge_derived,
    e_n,
    e_prime,
    e_one,
  };

  family_kind kind = family_kind::oml_law;
  int n = 0;          // primary numeric parameter (or I for godowski-transitivity)
  int j = 0, k = 0;   // godowski-jk: J, K; godowski-transitivity: J in j
  char variant = 0;   // oa3variant a..j, godowski-equivalent c|d|e
  std::string text;   // mge: the condensed equation, canonically serialized

  // Canonical text form; parse(to_string()) round-trips.
  std::string to_string() const;
  // Throws family_error(bad_parameter) on unknown names or bad parameters.
  static family_id parse(std::string_view s);

  friend bool operator==(const family_id&, const family_id&) = default;
};

// Builds the inference for a family. Variables, hypotheses and conclusion
// are fully closed; inf.name is the canonical family text. Terms are built
// in `store`. Throws family_error(bad_parameter) for bad parameters.
inference generate(const family_id& f, term_store& store);
inference generate(std::string_view family_text, term_store& store);

// Result of substituting terms for variables in an inference. Hypotheses
// whose substituted form holds identically on the discharge lattices (small
// orthomodular fixtures, checked exhaustively) are dropped from `result`;
// every hypothesis is listed with the outcome of that check, so nothing is
// discharged silently.
struct substitution_report {
  struct entry {
    std::string text;        // substituted hypothesis, printed
    bool discharged = false; // proven to hold identically, hence dropped
  };
  inference result;
  std::vector<entry> hypotheses;
};

// Applies `subs` (variable name -> replacement term) to an inference.
// Variables not in the map are kept. A variable-to-variable orthogonality
// hypothesis whose two sides stay plain variables is kept in that form;
// otherwise orthogonality x _|_ y is carried as the equality x ^ y' = x.
substitution_report substitute_generators(const inference& base,
                                          const std::map<std::string, term>& subs,
                                          term_store& store);

// The wagon-wheel diagram W_n: a rim cycle of 2n three-atom blocks joined at
// junction atoms, with n spokes connecting every other rim midpoint to a
// common hub atom. 5n+1 atoms, 3n blocks, lattice size 10n+4. The result is
// self-validated before it is returned: the five diagram conditions and the
// absence of loops of order <= 4 are checked, the lattice size is verified,
// a violation of ngo:n is found and re-verified, and for 4 <= n <= 5 the
// ngo:(n-1) law is proven exhaustively (for n = 3 the 2-variable chain law
// holds in every ortholattice, so there is nothing to prove; for n > 5 the
// exhaustive pass check is out of reach and is left to the caller).
// Throws family_error: bad_parameter for n < 3 or n > 12 (the textual atom
// alphabet has 61 characters), generator_invalid if self-validation fails.
diagram wagon_wheel(int n);

// A bundled test lattice: a Greechie diagram plus the family verdicts it is
// known to exhibit. `claims` pairs a family with the expected check outcome
// (true = the inference holds, false = it has a counterexample).
struct fixture {
  std::string id;
  std::string text;  // diagram in textual notation
  diagram d;         // parse(text)
  std::vector<std::pair<family_id, bool>> claims;
};

// The built-in corpus: one 13-atom lattice that satisfies the ortho-
// modular law but fails oa3 (noa:3), then fifteen larger lattices (35, 36
// and 39 atoms) that satisfy noa:5 and fail noa:6. Parsed once, cached.
const std::vector<fixture>& fixtures();

}  // namespace oml
