//! The seven-term relation expressing that `δ` is a second-order operator with
//! respect to the wedge product.

use super::form::Form;
use super::ops::{codifferential, wedge};

fn sign(exp: usize) -> f64 {
    if exp % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wedge where an overflowing degree means the product is zero.
fn w(a: &Option<Form>, b: &Option<Form>) -> Option<Form> {
    match (a, b) {
        (Some(a), Some(b)) if a.degree() + b.degree() <= 3 => Some(wedge(a, b).expect("degree checked")),
        _ => None,
    }
}

/// `δ`, with the codifferential of a function (a (−1)-form) being zero.
fn d(a: &Option<Form>) -> Option<Form> {
    a.as_ref().filter(|f| f.degree() > 0).map(codifferential)
}

fn accumulate(total: &mut Option<Form>, s: f64, term: Option<Form>) {
    if let Some(t) = term {
        match total {
            Some(acc) => acc.axpy(s, &t),
            None => *total = Some(t.scale(s)),
        }
    }
}

/// Sup-norm of `LHS − RHS` of
///
/// ```text
/// δ(αβγ) = δ(αβ)γ + (−1)^|α| αδ(βγ) + (−1)^{|β||γ|} δ(αγ)β
///          − δ(α)βγ − (−1)^|α| αδ(β)γ − (−1)^{|α|+|β|} αβδ(γ)
/// ```
///
/// Terms whose degree overflows 3 are zero.
pub fn bv_seven_term_residual(alpha: &Form, beta: &Form, gamma: &Form) -> f64 {
    let (a, b, c) = (Some(alpha.clone()), Some(beta.clone()), Some(gamma.clone()));
    let (p, q, r) = (alpha.degree(), beta.degree(), gamma.degree());

    let mut diff = None;
    accumulate(&mut diff, 1.0, d(&w(&w(&a, &b), &c)));
    accumulate(&mut diff, -1.0, w(&d(&w(&a, &b)), &c));
    accumulate(&mut diff, -sign(p), w(&a, &d(&w(&b, &c))));
    accumulate(&mut diff, -sign(q * r), w(&d(&w(&a, &c)), &b));
    accumulate(&mut diff, 1.0, w(&w(&d(&a), &b), &c));
    accumulate(&mut diff, sign(p), w(&w(&a, &d(&b)), &c));
    accumulate(&mut diff, sign(p + q), w(&w(&a, &b), &d(&c)));
    diff.map_or(0.0, |f| f.sup_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{random_bandlimited, Grid};

    #[test]
    fn constants_give_zero() {
        let g = Grid::new(8).unwrap();
        let c = Form::constant(&g, 0, &[2.0]);
        assert_eq!(bv_seven_term_residual(&c, &c, &c), 0.0);
    }

    #[test]
    fn function_one_form_unit() {
        let g = Grid::new(32).unwrap();
        let a = Form::function(&g, |x, _, _| x.sin());
        let b = Form::from_fn(&g, 1, |_, y, _| vec![y.cos(), 0.0, 0.0]);
        let c = Form::constant(&g, 0, &[1.0]);
        assert!(bv_seven_term_residual(&a, &b, &c) <= 1e-10);
    }

    #[test]
    fn random_function_one_one() {
        let g = Grid::new(32).unwrap();
        for seed in 0..3 {
            let a = random_bandlimited(&g, 0, 2, seed, false).unwrap();
            let b = random_bandlimited(&g, 1, 2, seed + 100, false).unwrap();
            let c = random_bandlimited(&g, 1, 2, seed + 200, false).unwrap();
            let r = bv_seven_term_residual(&a, &b, &c);
            assert!(r <= 1e-10, "seed {seed}: {r:e}");
        }
    }

    #[test]
    fn wrong_sign_is_detected() {
        // Dropping the Koszul sign on the third term breaks the relation for odd β, γ.
        let g = Grid::new(16).unwrap();
        let a = random_bandlimited(&g, 1, 1, 1, false).unwrap();
        let b = random_bandlimited(&g, 1, 1, 2, false).unwrap();
        let c = random_bandlimited(&g, 1, 1, 3, false).unwrap();
        let third = w(&d(&w(&Some(a.clone()), &Some(c.clone()))), &Some(b.clone())).unwrap();
        assert!(bv_seven_term_residual(&a, &b, &c) <= 1e-10);
        assert!(third.sup_norm() > 1e-3);
    }
}
