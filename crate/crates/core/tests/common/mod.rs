//! Seeded law checks shared by the acceptance harness and the property suite.
#![allow(dead_code)]

use ncvar_core::algebra::{q, CyclicPoly, DiffPoly, Family, Letter, Mode, MultiIndex, Q};
use ncvar_core::frontend::{
    default_slot_names, from_json, parse_cyclic, parse_operator, parse_poly, render_cyclic, render_operator,
    render_poly, to_json, Value,
};
use ncvar_core::jet::{
    adjoint, apply, couple, euler_all, evolutionary, lift_covector_velocity, linearize, normal_form,
    total_derivative, Covector, DiffOperator, Functional, Side, VectorCharacteristic,
};
use ncvar_core::multivector::{commutator, multivector_from_density, odd_field, schouten, Multivector};
use ncvar_core::poisson::{jacobiator, poisson_bracket, skew_part};
use ncvar_core::testkit::{CommutativeProjection, GenSpec, Sampler};
use ncvar_core::Context;

pub type Check = Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn sampler(seed: u64, gens: usize, max_len: usize, max_order: u8) -> Sampler {
    Sampler::new(GenSpec { seed, gens, max_len, max_order, max_terms: 2, ..GenSpec::default() })
}

fn neg_one() -> Q {
    q(-1)
}

/// `δ/δa (D_x f) = 0` and `δ/δb (D_x f) = 0` on both sides.
pub fn euler_kills_total_derivatives(seed: u64, gens: usize) -> Check {
    let mut s = Sampler::new(GenSpec { seed, gens, max_len: 4, max_order: 3, max_terms: 3, ..GenSpec::default() });
    let ctx = s.context();
    let f = s.poly();
    let df = ctx.close(&total_derivative(&ctx, &f, 1).map_err(|e| e.to_string())?);
    for family in [Family::A, Family::B] {
        for side in [Side::Right, Side::Left] {
            let e = euler_all(&ctx, &df, family, side).map_err(|e| e.to_string())?;
            ensure(e.iter().all(DiffPoly::is_zero), || format!("seed {seed}: δ/δ{family:?} of D_x f nonzero"))?;
        }
    }
    Ok(())
}

/// `⟨p₁, A p₂⟩ = ⟨p₂, A† p₁⟩` and `(A†)† = A`.
pub fn adjoint_identity(seed: u64, gens: usize) -> Check {
    let mut s = sampler(seed, gens, 2, 3);
    let ctx = s.context();
    let op = s.operator();
    let p1 = s.vector();
    let p2 = s.vector();
    let adj = adjoint(&ctx, &op).map_err(|e| e.to_string())?;
    let lhs = couple(&ctx, &Covector::new(p1.clone()), &VectorCharacteristic::on_a(apply(&ctx, &op, &[p2.clone()]).unwrap()))
        .unwrap();
    let rhs = couple(&ctx, &Covector::new(p2), &VectorCharacteristic::on_a(apply(&ctx, &adj, &[p1]).unwrap())).unwrap();
    ensure(lhs == rhs, || format!("seed {seed}: adjoint identity fails for {op}"))?;
    let back = adjoint(&ctx, &adj).unwrap();
    ensure(back == op, || format!("seed {seed}: adjoint is not an involution"))
}

/// `∂_φ⟨p,ψ⟩ = ⟨lift(φ,p), ψ⟩ + ⟨p, ∂_φ ψ − ℓ_φ ψ⟩`.
pub fn lift_contract(seed: u64, gens: usize) -> Check {
    let mut s = sampler(seed, gens, 2, 2);
    let ctx = s.context();
    let phi = VectorCharacteristic::on_a(s.vector());
    let p = Covector::new(s.vector());
    let psi = s.vector();
    let pairing = couple(&ctx, &p, &VectorCharacteristic::on_a(psi.clone())).unwrap();
    let lhs = normal_form(&ctx, &ctx.close(&evolutionary(&ctx, &phi, &pairing.to_open()).unwrap()));
    let lifted = lift_covector_velocity(&ctx, &phi, &p).unwrap();
    let first = couple(&ctx, &lifted, &VectorCharacteristic::on_a(psi.clone())).unwrap();
    let l_psi = apply(&ctx, &linearize(&ctx, &phi.components).unwrap(), &[psi.clone()]).unwrap();
    let moved: Vec<DiffPoly> = psi
        .iter()
        .zip(&l_psi)
        .map(|(x, lx)| &evolutionary(&ctx, &phi, x).unwrap() - lx)
        .collect();
    let second = couple(&ctx, &p, &VectorCharacteristic::on_a(moved)).unwrap();
    let rhs = normal_form(&ctx, &(first.as_cyclic() + second.as_cyclic()));
    ensure(lhs == rhs, || format!("seed {seed}: lift contract fails"))
}

fn sign_swap(k: usize, l: usize) -> bool {
    // (-1)^{(k-1)(l-1)} with k, l ≥ 0
    (k + 1) % 2 == 1 && (l + 1) % 2 == 1
}

fn add_signed(ctx: &Context, x: &Functional, y: &Functional, negate_y: bool) -> Functional {
    let y = if negate_y { y.scale(&neg_one()) } else { y.as_cyclic().clone() };
    normal_form(ctx, &(x.as_cyclic() + &y))
}

/// `[[ξ,η]] = −(−1)^{(k−1)(ℓ−1)} [[η,ξ]]`.
pub fn skew_symmetry(seed: u64, k: usize, l: usize) -> Check {
    let mut s = sampler(seed, 1, 3, 2);
    let ctx = s.context();
    let xi = s.multivector(k);
    let eta = s.multivector(l);
    let x = schouten(&ctx, &xi, &eta);
    let y = schouten(&ctx, &eta, &xi);
    // x + (-1)^{(k-1)(l-1)} y = 0
    let sum = add_signed(&ctx, x.body(), y.body(), sign_swap(k, l));
    ensure(sum.is_zero(), || format!("seed {seed}: skew-symmetry fails for degrees ({k},{l})"))
}

/// `[[ξ,[[η,ζ]]]] = [[[[ξ,η]],ζ]] + (−1)^{(k−1)(ℓ−1)} [[η,[[ξ,ζ]]]]`.
/// `Ok(true)` when at least one side is nonzero.
pub fn jacobi(seed: u64, k: usize, l: usize, m: usize) -> Result<bool, String> {
    let mut s = Sampler::new(GenSpec { seed, max_len: 4, max_order: 2, max_terms: 3, ..GenSpec::default() });
    let ctx = s.context();
    let xi = s.multivector(k);
    let eta = s.multivector(l);
    let zeta = s.multivector(m);
    let lhs = schouten(&ctx, &xi, &schouten(&ctx, &eta, &zeta));
    let r1 = schouten(&ctx, &schouten(&ctx, &xi, &eta), &zeta);
    let r2 = schouten(&ctx, &eta, &schouten(&ctx, &xi, &zeta));
    let rhs = add_signed(&ctx, r1.body(), r2.body(), sign_swap(k, l));
    ensure(lhs.body() == &rhs, || format!("seed {seed}: Jacobi fails for degrees ({k},{l},{m})"))?;
    Ok(!lhs.is_zero() || !r1.is_zero())
}

/// `⟨b, φ⟩ = Σ_j tr(b^j φ^j)`.
pub fn one_vector(ctx: &Context, phi: &[DiffPoly]) -> Multivector {
    let mut c = CyclicPoly::zero();
    for (j, f) in phi.iter().enumerate() {
        c += &ctx.close(&DiffPoly::letter(Letter::plain(Family::B, j as u8)).concat(f));
    }
    multivector_from_density(ctx, &c).unwrap()
}

/// `[[⟨b,φ₁⟩,⟨b,φ₂⟩]] = ⟨b, −(∂_{φ₁}φ₂ − ∂_{φ₂}φ₁)⟩`.
pub fn one_vector_formula(seed: u64, gens: usize) -> Check {
    let mut s = sampler(seed, gens, 2, 2);
    let ctx = s.context();
    let f1 = s.vector();
    let f2 = s.vector();
    let got = schouten(&ctx, &one_vector(&ctx, &f1), &one_vector(&ctx, &f2));
    let v1 = VectorCharacteristic::on_a(f1.clone());
    let v2 = VectorCharacteristic::on_a(f2.clone());
    let bracket: Vec<DiffPoly> = f1
        .iter()
        .zip(&f2)
        .map(|(x1, x2)| &evolutionary(&ctx, &v2, x1).unwrap() - &evolutionary(&ctx, &v1, x2).unwrap())
        .collect();
    let expected = one_vector(&ctx, &bracket);
    ensure(got.body() == expected.body(), || format!("seed {seed}: one-vector formula fails"))
}

/// `[Q^ξ, Q^η] = Q^{[[ξ,η]]}` on `probes` random multivectors.
pub fn field_correspondence(seed: u64, probes: usize) -> Check {
    let mut s = sampler(seed, 1, 2, 1);
    let ctx = s.context();
    let k = (seed % 3) as usize;
    let l = ((seed / 3) % 3) as usize;
    let xi = s.multivector(k);
    let eta = s.multivector(l);
    let left = commutator(&ctx, &odd_field(&ctx, &xi), &odd_field(&ctx, &eta));
    let right = odd_field(&ctx, &schouten(&ctx, &xi, &eta));
    for i in 0..probes {
        let omega = s.multivector(i % 3);
        let x = left.apply_functional(&ctx, omega.body());
        let y = right.apply_functional(&ctx, omega.body());
        ensure(x == y, || format!("seed {seed}: field correspondence fails on probe {i} (degrees {k},{l})"))?;
    }
    Ok(())
}

/// Random skew-adjoint operator.
pub fn skew_operator(s: &mut Sampler) -> DiffOperator {
    let ctx = s.context();
    let op = s.operator();
    skew_part(&ctx, &op).unwrap()
}

/// `{H₁,H₂} + {H₂,H₁} = 0`.
pub fn poisson_skew(seed: u64, commutative: bool) -> Check {
    let mut s = Sampler::new(GenSpec {
        seed,
        max_len: 3,
        max_order: 2,
        max_terms: 2,
        b_degree: Some(0),
        commutative,
        ..GenSpec::default()
    });
    let ctx = s.context();
    let op = skew_operator(&mut s);
    let h1 = s.density();
    let h2 = s.density();
    let x = poisson_bracket(&ctx, &h1, &h2, &op).unwrap();
    let y = poisson_bracket(&ctx, &h2, &h1, &op).unwrap();
    ensure(add_signed(&ctx, &x, &y, false).is_zero(), || format!("seed {seed}: Poisson bracket not skew"))
}

pub fn hamiltonian_triple(seed: u64, commutative: bool) -> (Context, [CyclicPoly; 3]) {
    let mut s = Sampler::new(GenSpec {
        seed,
        max_len: 3,
        max_order: 1,
        max_terms: 2,
        b_degree: Some(0),
        commutative,
        ..GenSpec::default()
    });
    let ctx = s.context();
    (ctx, [s.density(), s.density(), s.density()])
}

pub fn jacobiator_vanishes(ctx: &Context, op: &DiffOperator, hs: &[CyclicPoly; 3]) -> Check {
    let j = jacobiator(ctx, &hs[0], &hs[1], &hs[2], op).map_err(|e| e.to_string())?;
    ensure(j.is_zero(), || format!("jacobiator nonzero for {op}"))
}

/// Projection intertwines `D`, `δ/δ`, `⟨,⟩` and `[[,]]`.
pub fn projection_intertwines(seed: u64) -> Check {
    let mut s = sampler(seed, 1 + (seed % 2) as usize, 3, 2);
    let cyc = s.context();
    let com = cyc.with_mode(Mode::Commutative);
    let p = s.poly();
    let dp = total_derivative(&cyc, &p, 1).unwrap();
    ensure(
        dp.commutative_projection() == total_derivative(&com, &p.commutative_projection(), 1).unwrap(),
        || format!("seed {seed}: D does not commute with projection"),
    )?;
    let f = s.density();
    for family in [Family::A, Family::B] {
        let e_cyc = euler_all(&cyc, &f, family, Side::Right).unwrap();
        let e_com = euler_all(&com, &f.commutative_projection(), family, Side::Right).unwrap();
        ensure(e_cyc.commutative_projection() == e_com, || format!("seed {seed}: δ/δ{family:?} does not commute with projection"))?;
    }
    let phi = s.vector();
    let cov = s.vector();
    let c_cyc = couple(&cyc, &Covector::new(cov.clone()), &VectorCharacteristic::on_a(phi.clone())).unwrap();
    let c_com = couple(
        &com,
        &Covector::new(cov.commutative_projection()),
        &VectorCharacteristic::on_a(phi.commutative_projection()),
    )
    .unwrap();
    ensure(normal_form(&com, &c_cyc.commutative_projection()) == c_com, || format!("seed {seed}: coupling does not commute with projection"))?;
    let k = (seed % 3) as usize;
    let l = ((seed / 3) % 3) as usize;
    let xi = s.multivector(k);
    let eta = s.multivector(l);
    let b_cyc = schouten(&cyc, &xi, &eta);
    let pxi = multivector_from_density(&com, &xi.body().commutative_projection()).unwrap();
    let peta = multivector_from_density(&com, &eta.body().commutative_projection()).unwrap();
    let b_com = schouten(&com, &pxi, &peta);
    ensure(
        normal_form(&com, &b_cyc.body().commutative_projection()) == *b_com.body(),
        || format!("seed {seed}: bracket does not commute with projection"),
    )
}

/// Text and document round trips for a random poly, density, and operator.
pub fn frontend_round_trip(seed: u64) -> Check {
    let gens = 1 + (seed % 2) as usize;
    let base_dim = 1 + ((seed / 2) % 2) as usize;
    let commutative = (seed / 4) % 2 == 1;
    let mut s = Sampler::new(GenSpec { seed, gens, base_dim, commutative, max_len: 3, max_order: 3, ..GenSpec::default() });
    let ctx = s.context();

    let p = s.poly();
    let text = render_poly(&ctx, &p);
    ensure(parse_poly(&ctx, &text).ok() == Some(p.clone()), || format!("seed {seed}: poly text round trip fails on '{text}'"))?;
    json_round_trip(&ctx, Value::Poly(p), seed)?;

    let c = s.density();
    let c = if seed % 3 == 0 { normal_form(&ctx, &c).into_cyclic() } else { c };
    let text = render_cyclic(&ctx, &c);
    ensure(parse_cyclic(&ctx, &text).ok() == Some(c.clone()), || format!("seed {seed}: density text round trip fails on '{text}'"))?;
    json_round_trip(&ctx, Value::Cyclic(c), seed)?;

    let op = s.operator();
    let names = default_slot_names(1);
    let text = render_operator(&ctx, &op, &names);
    let back = parse_operator(&ctx, &text, &[names[0].as_str()]);
    ensure(back.as_ref().ok() == Some(&op), || format!("seed {seed}: operator text round trip fails on '{text}': {back:?}"))?;
    json_round_trip(&ctx, Value::Operator(op), seed)?;

    let v = s.vector();
    json_round_trip(&ctx, Value::Vector(v), seed)
}

fn json_round_trip(ctx: &Context, v: Value, seed: u64) -> Check {
    let s1 = to_json(ctx, &v);
    let (ctx2, back) = from_json(&s1).map_err(|e| format!("seed {seed}: {e}"))?;
    ensure(back == v, || format!("seed {seed}: document round trip changes the value"))?;
    ensure(to_json(&ctx2, &back) == s1, || format!("seed {seed}: document round trip not bit-exact"))
}

pub fn dx(ctx: &Context, k: u8) -> DiffOperator {
    DiffOperator::diagonal_derivative(ctx, MultiIndex::along_first(k))
}

/// The named operators of the verdict suite, as source text.
pub const COMMUTATOR_OP: &str = "a*p - p*a";
pub const A_SQUARED_OP: &str = "2 a*a*p_1 + 2 a*a_1*p";
pub const A_X_OP: &str = "2 a_1*p_1 + a_2*p";
