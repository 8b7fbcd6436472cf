// Lane-generic math and kernel bodies. Textually included inside an anonymous
// namespace by each kernel translation unit after it has defined its backend:
//
//   constexpr int W;                      lanes per vector
//   V   double lanes (ctor from double; + - * /)
//   M   lane mask; and_(M,M), or_(M,M)
//   U   uint64 lanes (ctor from uint64; & | ^ + - << >>)
//   lt, le, gt, ge : (V, V) -> M
//   select(M, V if_true, V if_false), vfloor(V), vabs(V), any(M)
//   as_bits(V) -> U, as_double(U) -> V, mul32(U, U) -> U (low 32 x low 32)
//   lane_iota(uint64 base) -> U, load_strided(const double*, stride) -> V,
//   store(V, double*)
//   large_sincos_fixup(V x, M large, V& s, V& c)
//
// Every function below is written once, so all backends perform the same IEEE
// operations per lane.

// ---------------------------------------------------------------- Philox4x32-10

struct Ctr4 {
  U c0, c1, c2, c3;
};

inline Ctr4 philox(Ctr4 c, U k0, U k1) {
  const U m0(0xD2511F53ull), m1(0xCD9E8D57ull);
  const U w0(0x9E3779B9ull), w1(0xBB67AE85ull);
  const U lo(0xFFFFFFFFull);
  for (int round = 0; round < 10; ++round) {
    const U p0 = mul32(m0, c.c0);
    const U p1 = mul32(m1, c.c2);
    c = {(p1 >> 32) ^ c.c1 ^ k0, p1 & lo, (p0 >> 32) ^ c.c3 ^ k1, p0 & lo};
    k0 = (k0 + w0) & lo;
    k1 = (k1 + w1) & lo;
  }
  return c;
}

inline V open_uniform(U lo32, U hi32) {
  const U bits = lo32 | (hi32 << 32);
  const V one_two = as_double((bits >> 12) | U(0x3FF0000000000000ull));
  return (one_two - V(1.0)) + V(0x1p-53);
}

// ------------------------------------------------------------------ polynomials

template <std::size_t N>
inline V polevl(V x, const double (&c)[N]) {
  V acc(c[0]);
  for (std::size_t i = 1; i < N; ++i) acc = acc * x + V(c[i]);
  return acc;
}

// Leading coefficient 1 implied.
template <std::size_t N>
inline V p1evl(V x, const double (&c)[N]) {
  V acc = x + V(c[0]);
  for (std::size_t i = 1; i < N; ++i) acc = acc * x + V(c[i]);
  return acc;
}

// ------------------------------------------------------------------------- log

// Cephes log: x = m * 2^e with m in [sqrt(1/2), sqrt(2)), rational
// approximation of log(1 + f). Positive normal inputs only.
inline V vlog(V x) {
  static constexpr double P[] = {1.01875663804580931796E-4, 4.97494994976747001425E-1,
                                 4.70579119878881725854E0,  1.44989225341610930846E1,
                                 1.79368678507819816313E1,  7.70838733755885391666E0};
  static constexpr double Q[] = {1.12873587189167450590E1, 4.52279145837532221105E1,
                                 8.29875266912776603211E1, 7.11544750618563894466E1,
                                 2.31251620126765340583E1};
  const U bits = as_bits(x);
  const V biased =
      as_double(((bits >> 52) & U(0x7FFull)) | U(0x4330000000000000ull)) - V(4503599627370496.0);
  V e = biased - V(1022.0);
  V m = as_double((bits & U(0x800FFFFFFFFFFFFFull)) | U(0x3FE0000000000000ull));
  const M small = lt(m, V(0.70710678118654752440));
  e = select(small, e - V(1.0), e);
  m = select(small, (m + m) - V(1.0), m - V(1.0));
  const V z = m * m;
  V y = m * (z * polevl(m, P) / p1evl(m, Q));
  y = y - e * V(2.121944400546905827679e-4);
  y = y - z * V(0.5);
  V r = m + y;
  return r + e * V(0.693359375);
}

// ------------------------------------------------------------------------- exp

// 2^n for integer-valued n in [-1022, 1023].
inline V pow2i(V n) {
  const V magic(6755399441055744.0);  // 2^52 + 2^51
  const U ni = as_bits(n + magic) - as_bits(magic);
  return as_double((ni + U(1023ull)) << 52);
}

// Cephes exp: x = n ln2 + r, |r| <= ln2/2, Padé form for e^r.
inline V vexp(V x) {
  static constexpr double P[] = {1.26177193074810590878E-4, 3.02994407707441961300E-2,
                                 9.99999999999999999910E-1};
  static constexpr double Q[] = {3.00198505138664455042E-6, 2.52448340349684104192E-3,
                                 2.27265548208155028766E-1, 2.00000000000000000009E0};
  const M overflow = gt(x, V(709.78271289338397));
  const M underflow = lt(x, V(-708.39641853226408));
  x = select(or_(overflow, underflow), V(0.0), x);
  const V n = vfloor(V(1.4426950408889634073599) * x + V(0.5));
  V r = x - n * V(6.93145751953125E-1);
  r = r - n * V(1.42860682030941723212E-6);
  const V rr = r * r;
  const V pr = r * polevl(rr, P);
  r = pr / (polevl(rr, Q) - pr);
  r = V(1.0) + V(2.0) * r;
  const V n1 = vfloor(n * V(0.5));
  r = (r * pow2i(n1)) * pow2i(n - n1);
  r = select(overflow, V(__builtin_inf()), r);
  return select(underflow, V(0.0), r);
}

// --------------------------------------------------------------------- sin/cos

inline constexpr double kSincosReductionLimit = 1e6;

// Cephes sin/cos with three-part Cody-Waite reduction by pi/4. Lanes with
// |x| > kSincosReductionLimit are recomputed by the C library.
inline void vsincos(V x, V& s, V& c) {
  static constexpr double SC[] = {1.58962301576546568060E-10, -2.50507477628578072866E-8,
                                  2.75573136213857245213E-6,  -1.98412698295895385996E-4,
                                  8.33333333332211858878E-3,  -1.66666666666666307295E-1};
  static constexpr double CC[] = {-1.13585365213876817300E-11, 2.08757008419747316778E-9,
                                  -2.75573141792967388112E-7,  2.48015872888517045348E-5,
                                  -1.38888888888730564116E-3,  4.16666666666665929218E-2};
  const M negative = lt(x, V(0.0));
  const V ax = vabs(x);
  const M large = gt(ax, V(kSincosReductionLimit));
  const V xr = select(large, V(0.0), ax);
  V y = vfloor(xr * V(1.27323954473516268615));
  y = y + (y - V(2.0) * vfloor(y * V(0.5)));  // round odd octants up
  const V j = y - V(8.0) * vfloor(y * V(0.125));  // 0, 2, 4, 6
  const M upper = ge(j, V(4.0));
  const V jj = select(upper, j - V(4.0), j);
  const M swap = ge(jj, V(2.0));  // polynomial roles exchanged

  V z = xr - y * V(7.85398125648498535156E-1);
  z = z - y * V(3.77489470793079817668E-8);
  z = z - y * V(2.69515142907905952645E-15);
  const V zz = z * z;
  const V sin_poly = z + z * zz * polevl(zz, SC);
  const V cos_poly = (V(1.0) - zz * V(0.5)) + zz * zz * polevl(zz, CC);

  V sv = select(swap, cos_poly, sin_poly);
  V cv = select(swap, sin_poly, cos_poly);
  // sin sign: upper half-turn xor negative argument; cos sign: upper xor swap.
  const V sflip = select(upper, V(-1.0), V(1.0)) * select(negative, V(-1.0), V(1.0));
  const V cflip = select(upper, V(-1.0), V(1.0)) * select(swap, V(-1.0), V(1.0));
  s = sv * sflip;
  c = cv * cflip;
  if (any(large)) large_sincos_fixup(x, large, s, c);
}

// -------------------------------------------------------------------- kernels

struct JumpLanes {
  V radius;
  V atom;
};

// One tempered jump per lane; lane counters are (block, stream) with the block
// index 2j already in blk_lo/blk_hi (even, so 2j+1 never carries).
inline JumpLanes tempered_jump(const tsrw::simd::JumpKernelParams& p, U blk_lo, U blk_hi, U s_lo,
                               U s_hi, U k0, U k1, V* dir) {
  const Ctr4 a = philox({blk_lo, blk_hi, s_lo, s_hi}, k0, k1);
  const Ctr4 b = philox({blk_lo + U(1ull), blk_hi, s_lo, s_hi}, k0, k1);
  const V u_radius = open_uniform(a.c0, a.c1);
  const V u_dir = open_uniform(a.c2, a.c3);
  const V u_comp = open_uniform(b.c0, b.c1);
  const V u_temper = open_uniform(b.c2, b.c3);

  V scale(p.comp_scale[0]);
  for (int i = 1; i < p.n_components; ++i) {
    scale = select(ge(u_comp, V(p.comp_cum[i - 1])), V(p.comp_scale[i]), scale);
  }
  const V pareto = scale * vexp(vlog(u_radius) * V(p.neg_inv_alpha));

  V atom(0.0);
  V neg_inv_rate(p.atom_neg_inv_rate ? p.atom_neg_inv_rate[0] : 0.0);
  for (int k = 0; k < p.dim; ++k) dir[k] = V(p.atom_dirs[k]);
  for (int i = 1; i < p.n_atoms; ++i) {
    const M take = ge(u_dir, V(p.atom_cum[i - 1]));
    atom = select(take, V(static_cast<double>(i)), atom);
    if (p.atom_neg_inv_rate) neg_inv_rate = select(take, V(p.atom_neg_inv_rate[i]), neg_inv_rate);
    for (int k = 0; k < p.dim; ++k) dir[k] = select(take, V(p.atom_dirs[i * p.dim + k]), dir[k]);
  }

  V radius = pareto;
  if (p.kind == tsrw::simd::TemperKind::Exponential) {
    const V vt = V(p.v) * (vlog(u_temper) * neg_inv_rate);
    radius = select(lt(vt, pareto), vt, pareto);
  } else if (p.kind == tsrw::simd::TemperKind::Generic) {
    double u[W];
    double at[W];
    double vt[W];
    store(u_temper, u);
    store(atom, at);
    for (int l = 0; l < W; ++l) {
      vt[l] = p.v * p.inverse_survival(p.ctx, u[l], static_cast<int>(at[l]));
    }
    const V vtl = load_strided(vt, 1);
    radius = select(lt(vtl, pareto), vtl, pareto);
  }
  return {radius, atom};
}

inline void accumulate_rows_body(const tsrw::simd::JumpKernelParams& p,
                                 const tsrw::simd::RowSumTask& t) {
  const U k0(p.seed & 0xFFFFFFFFull);
  const U k1(p.seed >> 32);
  const U lo_mask(0xFFFFFFFFull);
  for (std::uint64_t g = 0; g < t.count; g += W) {
    const U stream = lane_iota(t.first_stream + g);
    const U s_lo = stream & lo_mask;
    const U s_hi = stream >> 32;
    const std::uint64_t live = (t.count - g < static_cast<std::uint64_t>(W)) ? t.count - g : W;
    V sum[tsrw::simd::kMaxDim];
    for (int k = 0; k < p.dim; ++k) sum[k] = V(0.0);
    std::uint64_t j = 0;
    for (std::uint64_t c = 0; c < t.n_checkpoints; ++c) {
      for (; j < t.checkpoints[c]; ++j) {
        const std::uint64_t blk = 2 * j;
        V dir[tsrw::simd::kMaxDim];
        const JumpLanes y =
            tempered_jump(p, U(blk & 0xFFFFFFFFull), U(blk >> 32), s_lo, s_hi, k0, k1, dir);
        for (int k = 0; k < p.dim; ++k) sum[k] = sum[k] + y.radius * dir[k];
      }
      for (int k = 0; k < p.dim; ++k) {
        double lanes[W];
        store(sum[k], lanes);
        for (std::uint64_t l = 0; l < live; ++l) {
          t.out[((g + l) * t.n_checkpoints + c) * static_cast<std::uint64_t>(p.dim) + k] =
              lanes[l];
        }
      }
    }
  }
}

inline void generate_jumps_body(const tsrw::simd::JumpKernelParams& p,
                                const tsrw::simd::JumpBatchTask& t) {
  const U k0(p.seed & 0xFFFFFFFFull);
  const U k1(p.seed >> 32);
  const U s_lo(t.stream & 0xFFFFFFFFull);
  const U s_hi(t.stream >> 32);
  for (std::uint64_t g = 0; g < t.count; g += W) {
    const U jump = lane_iota(t.first_jump + g);
    const U blk = jump + jump;
    V dir[tsrw::simd::kMaxDim];
    const JumpLanes y =
        tempered_jump(p, blk & U(0xFFFFFFFFull), blk >> 32, s_lo, s_hi, k0, k1, dir);
    double radius[W];
    double atom[W];
    store(y.radius, radius);
    store(y.atom, atom);
    const std::uint64_t live = (t.count - g < static_cast<std::uint64_t>(W)) ? t.count - g : W;
    for (std::uint64_t l = 0; l < live; ++l) {
      t.radius[g + l] = radius[l];
      t.atom[g + l] = static_cast<std::int32_t>(atom[l]);
    }
  }
}

inline void cf_sums_body(const tsrw::simd::CfTask& t) {
  const std::size_t dim = static_cast<std::size_t>(t.dim);
  for (std::size_t li = 0; li < t.n_lambda; ++li) {
    const double* lam = t.lambdas + li * dim;
    V cos_acc(0.0);
    V sin_acc(0.0);
    std::size_t r = 0;
    for (; r + W <= t.rows; r += W) {
      V theta(0.0);
      for (std::size_t k = 0; k < dim; ++k) {
        theta = theta + V(lam[k]) * load_strided(t.samples + r * dim + k, dim);
      }
      V s, c;
      vsincos(theta, s, c);
      cos_acc = cos_acc + c;
      sin_acc = sin_acc + s;
    }
    double cl[W];
    double sl[W];
    store(cos_acc, cl);
    store(sin_acc, sl);
    double cos_sum = 0.0;
    double sin_sum = 0.0;
    for (int l = 0; l < W; ++l) {
      cos_sum += cl[l];
      sin_sum += sl[l];
    }
    for (; r < t.rows; ++r) {
      double theta = 0.0;
      for (std::size_t k = 0; k < dim; ++k) theta += lam[k] * t.samples[r * dim + k];
      V s, c;
      vsincos(V(theta), s, c);
      store(c, cl);
      store(s, sl);
      cos_sum += cl[0];
      sin_sum += sl[0];
    }
    t.cos_sum[li] = cos_sum;
    t.sin_sum[li] = sin_sum;
  }
}
