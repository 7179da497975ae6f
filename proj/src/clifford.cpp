#include "agf/clifford.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace agf {

namespace {

inline int parity(std::uint32_t v) { return __builtin_popcount(v) & 1; }

// Symplectic product of two rows, <(x|z), (x'|z')> = x.z' + z.x' over GF(2).
inline int symp(const CliffordTableau::PauliRow& a, const CliffordTableau::PauliRow& b) {
  return parity((a.x & b.z) ^ (a.z & b.x));
}

// ---------------------------------------------------------------------------
// GF(2) linear systems on 2n-bit vectors (x bits low, z bits high). Used to
// sample tableau rows uniformly among valid completions.

struct GF2System {
  int nbits;
  std::vector<std::uint32_t> rows;  // constraint masks
  std::vector<int> rhs;

  explicit GF2System(int nbits_) : nbits(nbits_) {}

  // parity(u & mask) == r
  void add(std::uint32_t mask, int r) {
    rows.push_back(mask);
    rhs.push_back(r);
  }

  struct Solution {
    std::uint32_t particular = 0;
    std::vector<std::uint32_t> null_basis;
  };

  Solution solve() const {
    std::vector<std::uint32_t> m = rows;
    std::vector<int> b = rhs;
    std::vector<int> pivot_of_row;
    std::vector<bool> is_pivot(nbits, false);

    std::size_t rank = 0;
    for (int col = 0; col < nbits; ++col) {
      std::size_t sel = rank;
      while (sel < m.size() && !((m[sel] >> col) & 1)) ++sel;
      if (sel == m.size()) continue;
      std::swap(m[sel], m[rank]);
      std::swap(b[sel], b[rank]);
      for (std::size_t r = 0; r < m.size(); ++r) {
        if (r != rank && ((m[r] >> col) & 1)) {
          m[r] ^= m[rank];
          b[r] ^= b[rank];
        }
      }
      pivot_of_row.push_back(col);
      is_pivot[col] = true;
      ++rank;
    }
    for (std::size_t r = rank; r < m.size(); ++r)
      if (b[r]) throw std::logic_error("GF2System: inconsistent constraints");

    Solution s;
    for (std::size_t r = 0; r < rank; ++r)
      if (b[r]) s.particular |= (1u << pivot_of_row[r]);
    for (int f = 0; f < nbits; ++f) {
      if (is_pivot[f]) continue;
      std::uint32_t v = 1u << f;
      for (std::size_t r = 0; r < rank; ++r)
        if ((m[r] >> f) & 1) v |= (1u << pivot_of_row[r]);
      s.null_basis.push_back(v);
    }
    return s;
  }
};

// Mask whose overlap parity with u equals the symplectic product <v, u>.
inline std::uint32_t symp_mask(const CliffordTableau::PauliRow& v, int n) {
  return (v.z) | (v.x << n);
}

inline CliffordTableau::PauliRow row_from_bits(std::uint32_t bits, int n) {
  CliffordTableau::PauliRow r;
  r.x = bits & ((1u << n) - 1u);
  r.z = (bits >> n) & ((1u << n) - 1u);
  return r;
}

// ---------------------------------------------------------------------------
// Elementary gate layer: tableau conjugation rules plus dense forms.

enum class GateKind { H, S, X, Z, CNOT, CZ, SWAP };

struct Gate {
  GateKind kind;
  int a = 0;
  int b = 0;
};

void apply_gate(CliffordTableau& t, const Gate& g) {
  const std::uint32_t ma = 1u << g.a;
  const std::uint32_t mb = 1u << g.b;
  for (auto& r : t.rows) {
    const bool xa = r.x & ma, za = r.z & ma;
    const bool xb = r.x & mb, zb = r.z & mb;
    switch (g.kind) {
      case GateKind::H:
        r.neg ^= xa && za;
        if (xa != za) {
          r.x ^= ma;
          r.z ^= ma;
        }
        break;
      case GateKind::S:
        r.neg ^= xa && za;
        if (xa) r.z ^= ma;
        break;
      case GateKind::X:
        r.neg ^= za;
        break;
      case GateKind::Z:
        r.neg ^= xa;
        break;
      case GateKind::CNOT:
        r.neg ^= xa && zb && (xb == za);
        if (xa) r.x ^= mb;
        if (zb) r.z ^= ma;
        break;
      case GateKind::CZ:
        r.neg ^= xa && xb && (za != zb);
        if (xa) r.z ^= mb;
        if (xb) r.z ^= ma;
        break;
      case GateKind::SWAP: {
        const bool txa = xa, tza = za;
        if (txa != xb) r.x ^= ma ^ mb;
        if (tza != zb) r.z ^= ma ^ mb;
        break;
      }
    }
  }
}

ComplexMatrix single_qubit_dense(int n, int q, const std::array<cdouble, 4>& g2) {
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix m(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    const int cq = (c >> q) & 1;
    for (int rq = 0; rq < 2; ++rq) {
      std::size_t r = (c & ~(std::size_t{1} << q)) | (std::size_t(rq) << q);
      m(r, c) = g2[rq * 2 + cq];
    }
  }
  return m;
}

ComplexMatrix two_qubit_dense(int n, int a, int b, const std::array<cdouble, 16>& g4) {
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix m(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    const int ca = (c >> a) & 1, cb = (c >> b) & 1;
    const std::size_t base = c & ~((std::size_t{1} << a) | (std::size_t{1} << b));
    for (int ra = 0; ra < 2; ++ra)
      for (int rb = 0; rb < 2; ++rb) {
        std::size_t r = base | (std::size_t(ra) << a) | (std::size_t(rb) << b);
        m(r, c) = g4[(ra * 2 + rb) * 4 + (ca * 2 + cb)];
      }
  }
  return m;
}

// Dense form of the INVERSE of g (what unitary synthesis accumulates).
ComplexMatrix gate_inverse_dense(int n, const Gate& g) {
  const double s = 0.70710678118654752440;
  switch (g.kind) {
    case GateKind::H:
      return single_qubit_dense(n, g.a, {cdouble(s), cdouble(s), cdouble(s), cdouble(-s)});
    case GateKind::S:  // S^-1 = diag(1, -i)
      return single_qubit_dense(n, g.a,
                                {cdouble(1), cdouble(0), cdouble(0), cdouble(0, -1)});
    case GateKind::X:
      return single_qubit_dense(n, g.a, {cdouble(0), cdouble(1), cdouble(1), cdouble(0)});
    case GateKind::Z:
      return single_qubit_dense(n, g.a, {cdouble(1), cdouble(0), cdouble(0), cdouble(-1)});
    case GateKind::CNOT: {
      std::array<cdouble, 16> m{};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m[((a * 2 + (b ^ a)) * 4) + (a * 2 + b)] = 1.0;
      return two_qubit_dense(n, g.a, g.b, m);
    }
    case GateKind::CZ: {
      std::array<cdouble, 16> m{};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m[(a * 2 + b) * 4 + (a * 2 + b)] = (a && b) ? -1.0 : 1.0;
      return two_qubit_dense(n, g.a, g.b, m);
    }
    case GateKind::SWAP: {
      std::array<cdouble, 16> m{};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m[(b * 2 + a) * 4 + (a * 2 + b)] = 1.0;
      return two_qubit_dense(n, g.a, g.b, m);
    }
  }
  throw std::logic_error("unreachable");
}

// Reduce t to the identity tableau, recording the applied gates.
std::vector<Gate> reduction_circuit(CliffordTableau t) {
  const int n = t.n;
  std::vector<Gate> gates;
  auto push = [&](GateKind k, int a, int b = 0) {
    gates.push_back({k, a, b});
    apply_gate(t, gates.back());
  };

  for (int i = 0; i < n; ++i) {
    auto clear_row_to_x = [&](int row) {
      // Bring rows[row] to +-X_i assuming its support lies on qubits >= i.
      if (((t.rows[row].x >> i) == 0)) {
        for (int j = i; j < n; ++j)
          if ((t.rows[row].z >> j) & 1) {
            push(GateKind::H, j);
            break;
          }
      }
      int piv = -1;
      for (int j = i; j < n; ++j)
        if ((t.rows[row].x >> j) & 1) {
          piv = j;
          break;
        }
      if (piv < 0) throw std::invalid_argument("tableau_to_unitary: inconsistent tableau");
      if (piv != i) push(GateKind::SWAP, i, piv);
      for (int j = 0; j < n; ++j)
        if (j != i && ((t.rows[row].x >> j) & 1)) push(GateKind::CNOT, i, j);
      if ((t.rows[row].z >> i) & 1) push(GateKind::S, i);
      for (int j = 0; j < n; ++j)
        if (j != i && ((t.rows[row].z >> j) & 1)) push(GateKind::CZ, i, j);
    };

    clear_row_to_x(i);
    // Flip X_i <-> Z_i, reduce the conjugate row the same way, flip back.
    push(GateKind::H, i);
    clear_row_to_x(n + i);
    push(GateKind::H, i);

    if (t.rows[i].neg) push(GateKind::Z, i);
    if (t.rows[n + i].neg) push(GateKind::X, i);
  }

  if (!(t == identity_tableau(n)))
    throw std::invalid_argument("tableau_to_unitary: reduction failed (invalid tableau)");
  return gates;
}

}  // namespace

std::string big_uint_to_string(BigUInt v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + int(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

CliffordTableau identity_tableau(int n) {
  CliffordTableau t;
  t.n = n;
  t.rows.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    t.rows[i].x = 1u << i;
    t.rows[n + i].z = 1u << i;
  }
  return t;
}

bool symplectic_condition_holds(const CliffordTableau& t) {
  const int n = t.n;
  if (static_cast<int>(t.rows.size()) != 2 * n) return false;
  for (int i = 0; i < 2 * n; ++i)
    for (int j = i; j < 2 * n; ++j) {
      int want = (j == i + n && i < n) ? 1 : 0;
      if (symp(t.rows[i], t.rows[j]) != want) return false;
    }
  return true;
}

CliffordTableau sample_clifford(int n, SeedStream& rng) {
  if (n < 1 || n > kMaxPauliQubits)
    throw std::invalid_argument("sample_clifford: qubit count out of range");
  CliffordTableau t;
  t.n = n;
  t.rows.resize(2 * n);

  auto draw = [&](const GF2System::Solution& s, bool exclude_zero) {
    std::uint32_t v = s.particular;
    const std::size_t k = s.null_basis.size();
    std::uint64_t coeff;
    if (exclude_zero && s.particular == 0) {
      coeff = 1 + rng.next_below((std::uint64_t{1} << k) - 1);
    } else {
      coeff = rng.next_below(std::uint64_t{1} << k);
    }
    for (std::size_t j = 0; j < k; ++j)
      if ((coeff >> j) & 1) v ^= s.null_basis[j];
    return v;
  };

  for (int i = 0; i < n; ++i) {
    // image of X_i: symplectically orthogonal to everything fixed so far
    GF2System sys_a(2 * n);
    for (int j = 0; j < i; ++j) {
      sys_a.add(symp_mask(t.rows[j], n), 0);
      sys_a.add(symp_mask(t.rows[n + j], n), 0);
    }
    auto sol_a = sys_a.solve();
    if (static_cast<int>(sol_a.null_basis.size()) != 2 * n - 2 * i)
      throw std::logic_error("sample_clifford: unexpected solution count");
    t.rows[i] = row_from_bits(draw(sol_a, true), n);

    // image of Z_i: additionally pairs with the image of X_i
    GF2System sys_b(2 * n);
    for (int j = 0; j < i; ++j) {
      sys_b.add(symp_mask(t.rows[j], n), 0);
      sys_b.add(symp_mask(t.rows[n + j], n), 0);
    }
    sys_b.add(symp_mask(t.rows[i], n), 1);
    auto sol_b = sys_b.solve();
    if (static_cast<int>(sol_b.null_basis.size()) != 2 * n - 2 * i - 1)
      throw std::logic_error("sample_clifford: unexpected solution count");
    t.rows[n + i] = row_from_bits(draw(sol_b, false), n);
  }

  for (auto& r : t.rows) r.neg = rng.next_below(2) != 0;
  return t;
}

BigUInt clifford_cardinality(int n) {
  if (n < 1) throw std::invalid_argument("clifford_cardinality: n must be >= 1");
  if (n > 7) throw std::invalid_argument("clifford_cardinality: value exceeds 128 bits");
  BigUInt v = BigUInt{1} << (n * n + 2 * n);
  for (int j = 1; j <= n; ++j) v *= (BigUInt{1} << (2 * j)) - 1;
  return v;
}

std::vector<CliffordTableau> enumerate_cliffords(int n) {
  if (n < 1 || n > 2) throw std::invalid_argument("enumerate_cliffords: only n <= 2");
  const int nb = 2 * n;
  std::vector<CliffordTableau> out;

  // Brute-force scan over all 2n x 2n binary matrices keeps the code
  // honest for the sizes where full enumeration is meaningful (16 resp.
  // 65536 candidates), then every sign pattern is appended.
  const std::uint64_t total = std::uint64_t{1} << (nb * nb);
  for (std::uint64_t code = 0; code < total; ++code) {
    CliffordTableau t;
    t.n = n;
    t.rows.resize(nb);
    for (int r = 0; r < nb; ++r) {
      std::uint32_t bits = (code >> (r * nb)) & ((1u << nb) - 1u);
      t.rows[r] = row_from_bits(bits, n);
    }
    if (!symplectic_condition_holds(t)) continue;
    for (std::uint32_t ph = 0; ph < (1u << nb); ++ph) {
      CliffordTableau s = t;
      for (int r = 0; r < nb; ++r) s.rows[r].neg = (ph >> r) & 1;
      out.push_back(std::move(s));
    }
  }
  return out;
}

ComplexMatrix tableau_to_unitary(const CliffordTableau& t) {
  if (t.n < 1 || t.n > 5)
    throw std::invalid_argument("tableau_to_unitary: dense synthesis limited to n <= 5");
  if (!symplectic_condition_holds(t))
    throw std::invalid_argument("tableau_to_unitary: tableau is not symplectic");

  std::vector<Gate> gates = reduction_circuit(t);
  const std::size_t d = std::size_t{1} << t.n;
  ComplexMatrix u = ComplexMatrix::identity(d);
  for (const Gate& g : gates) u = u * gate_inverse_dense(t.n, g);

  // fix global phase: first nonzero entry real positive
  for (const auto& v : u.data) {
    if (std::abs(v) > 1e-9) {
      u *= std::conj(v) / std::abs(v);
      break;
    }
  }
  return u;
}

std::string tableau_to_string(const CliffordTableau& t) {
  std::string s = std::to_string(t.n) + ";";
  for (const auto& r : t.rows) {
    for (int q = 0; q < t.n; ++q) s.push_back(((r.x >> q) & 1) ? '1' : '0');
    for (int q = 0; q < t.n; ++q) s.push_back(((r.z >> q) & 1) ? '1' : '0');
  }
  s.push_back(';');
  for (const auto& r : t.rows) s.push_back(r.neg ? '1' : '0');
  return s;
}

CliffordTableau tableau_from_string(const std::string& s) {
  auto p1 = s.find(';');
  auto p2 = s.rfind(';');
  if (p1 == std::string::npos || p2 == p1)
    throw std::invalid_argument("tableau_from_string: malformed input");
  int n = std::stoi(s.substr(0, p1));
  if (n < 1 || n > kMaxPauliQubits)
    throw std::invalid_argument("tableau_from_string: bad qubit count");
  const std::string bits = s.substr(p1 + 1, p2 - p1 - 1);
  const std::string phases = s.substr(p2 + 1);
  if (bits.size() != static_cast<std::size_t>(4 * n * n) ||
      phases.size() != static_cast<std::size_t>(2 * n))
    throw std::invalid_argument("tableau_from_string: wrong field length");

  CliffordTableau t;
  t.n = n;
  t.rows.resize(2 * n);
  std::size_t pos = 0;
  for (int r = 0; r < 2 * n; ++r) {
    for (int q = 0; q < n; ++q)
      if (bits[pos++] == '1') t.rows[r].x |= 1u << q;
    for (int q = 0; q < n; ++q)
      if (bits[pos++] == '1') t.rows[r].z |= 1u << q;
  }
  for (int r = 0; r < 2 * n; ++r) t.rows[r].neg = phases[r] == '1';
  if (!symplectic_condition_holds(t))
    throw std::invalid_argument("tableau_from_string: not symplectic");
  return t;
}

PauliOperator tableau_pauli_image(const CliffordTableau& t, const PauliOperator& w) {
  if (w.n != t.n) throw std::invalid_argument("tableau_pauli_image: qubit count mismatch");

  // Raw accumulator i^p X^x Z^z; multiplying on the right by another raw
  // Pauli picks up (-1)^{|z1 & x2|} from commuting Z past X.
  std::uint32_t ax = 0, az = 0;
  int ap = (__builtin_popcount(w.x_bits & w.z_bits) + w.phase_power) & 3;
  auto mul_row = [&](const CliffordTableau::PauliRow& r) {
    int p2 = (__builtin_popcount(r.x & r.z) + (r.neg ? 2 : 0)) & 3;
    ap = (ap + p2 + 2 * __builtin_popcount(az & r.x)) & 3;
    ax ^= r.x;
    az ^= r.z;
  };
  for (int q = 0; q < t.n; ++q)
    if ((w.x_bits >> q) & 1) mul_row(t.rows[q]);
  for (int q = 0; q < t.n; ++q)
    if ((w.z_bits >> q) & 1) mul_row(t.rows[t.n + q]);

  PauliOperator out;
  out.n = t.n;
  out.x_bits = ax;
  out.z_bits = az;
  out.phase_power = (ap - __builtin_popcount(ax & az)) & 3;
  return out;
}

}  // namespace agf
