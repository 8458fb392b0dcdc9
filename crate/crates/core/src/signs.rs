//! Every sign convention used by the library, in one place.
//!
//! Degrees are cohomological. A Hochschild cochain with `n` inputs has brace degree
//! `n - 1`; a cyclic functional on `A^{⊗(n+1)}` sits at level `n`.

/// Bumped whenever any convention below changes; printed by the CLI next to results.
pub const SIGN_CONVENTION_VERSION: u32 = 1;

/// Human-readable table of the conventions, one per line.
pub const SIGN_TABLE: &[(&str, &str)] = &[
    ("shift", "X[k]^n = X^{n+k}, d_{X[k]} = (-1)^k d_X"),
    ("cone", "Cone(f)^n = X^{n+1} ⊕ Y^n, D = [[-d_X, 0], [f, d_Y]]"),
    ("hom", "D(f) = d_Y f - (-1)^{|f|} f d_X"),
    ("tensor", "d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy"),
    ("maurer-cartan", "dD + D^2 = 0"),
    ("partial composition", "f ∘_i g = (-1)^{(i-1)(q-1)} f(.., g(..), ..), q = inputs of g"),
    ("multi-brace", "sign Σ_j (q_j - 1) (inputs of the result left of block j)"),
    ("gerstenhaber", "[f, g] = f{g} - (-1)^{(p-1)(q-1)} g{f}"),
    ("hochschild", "b f = (-1)^{p-1} [m, f]"),
    ("cup", "(f ∪ g)(a, b) = f(a) g(b), no sign"),
    ("cyclic rotation", "λφ(a_0, .., a_n) = (-1)^n φ(a_n, a_0, .., a_{n-1})"),
    ("cyclic brace", "φ{g} = Σ_j (-1)^{j(q-1)} φ ∘_j g + Σ_{r=1}^{q-1} λ^r(φ ∘_0 g); j >= 1 when q = 0"),
    ("connes b", "bφ = Σ_{i=0}^{n+1} (-1)^i φ ∘ d_i, d_{n+1} wraps a_{n+1} a_0"),
    ("connes B", "B = N σ_{-1} (1 - λ), σ_{-1}φ(a_0, .., a_n) = φ(1, a_0, .., a_n)"),
    ("periodicity", "S includes Tot^n slot k into Tot^{n+2} slot k+1"),
    ("trace form", "ω(f) = N(tr ∘ f): Hoch^n -> Hochcyc[-1]^n, where d = -b"),
];

/// `(-1)^e` as an integer, for any integer exponent.
pub fn parity_sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign attached to the partial composition `f ∘_i g` (`i` one-based, `q` inputs of `g`).
pub fn composition_sign(i: usize, q: usize) -> i64 {
    parity_sign((i as i64 - 1) * (q as i64 - 1))
}

/// Koszul sign between cochains with `p` and `q` inputs in the Gerstenhaber bracket.
pub fn bracket_sign(p: usize, q: usize) -> i64 {
    parity_sign((p as i64 - 1) * (q as i64 - 1))
}

/// Sign of the cyclic rotation moving the last `r` of `n` arguments to the front.
pub fn rotation_sign(r: usize, n: usize) -> i64 {
    parity_sign((r * (n - r)) as i64)
}
