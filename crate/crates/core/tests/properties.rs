use std::sync::OnceLock;

use proptest::prelude::*;

use mkw_core::embedding::{phi, phi_inverse};
use mkw_core::forest::enumerate_forests_up_to;
use mkw_core::growth::primitive_projection;
use mkw_core::lincomb::{int, shuffle, shuffle_forests, Comb};
use mkw_core::mkw::{mkw_antipode, mkw_coproduct, reduced_coproduct};
use mkw_core::postlie::{gl_antipode, gl_product, left_graft};
use mkw_core::text::parse_lincomb;
use mkw_core::{Alphabet, Forest, LinComb, TensorElem};

fn ab() -> &'static Alphabet {
    static A: OnceLock<Alphabet> = OnceLock::new();
    A.get_or_init(|| Alphabet::new(["a", "b"]).unwrap())
}

fn forests(max: usize) -> impl Strategy<Value = Forest> {
    let pool: Vec<Forest> = enumerate_forests_up_to(max, ab());
    prop::sample::select(pool)
}

fn comb(max: usize) -> impl Strategy<Value = LinComb> {
    prop::collection::vec((forests(max), -3i64..=3), 1..4).prop_map(|terms| {
        let mut x = LinComb::zero();
        for (f, c) in terms {
            x.add_term(f, int(c));
        }
        x
    })
}

fn tensor_shuffle(x: &TensorElem, y: &TensorElem) -> TensorElem {
    x.bilinear(y, |(a1, b1), (a2, b2)| TensorElem::pair(&shuffle_forests(a1, a2), &shuffle_forests(b1, b2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_parses_back(x in comb(4)) {
        prop_assert_eq!(parse_lincomb(&x.to_string(), ab()).unwrap(), x);
    }

    #[test]
    fn gl_product_is_associative(x in comb(2), y in comb(2), z in comb(2)) {
        prop_assert_eq!(gl_product(&gl_product(&x, &y), &z), gl_product(&x, &gl_product(&y, &z)));
    }

    #[test]
    fn gl_product_is_dual_to_the_coproduct(a in forests(3), b in forests(3)) {
        let prod = gl_product(&LinComb::basis(a.clone()), &LinComb::basis(b.clone()));
        for (x, c) in prod.iter() {
            prop_assert_eq!(mkw_coproduct(&LinComb::basis(x.clone())).coeff(&(a.clone(), b.clone())), c.clone());
        }
    }

    #[test]
    fn coproduct_respects_shuffle(x in comb(2), y in comb(2)) {
        let lhs = mkw_coproduct(&shuffle(&x, &y));
        prop_assert_eq!(lhs, tensor_shuffle(&mkw_coproduct(&x), &mkw_coproduct(&y)));
    }

    #[test]
    fn antipodes_invert_identity(x in comb(4)) {
        let cx = mkw_coproduct(&x);
        let left = cx.contract(|a, b| shuffle(&mkw_antipode(&LinComb::basis(a.clone())), &LinComb::basis(b.clone())));
        prop_assert_eq!(left, LinComb::unit().scale(&x.coeff(&Forest::unit())));
    }

    #[test]
    fn gl_antipode_reverses_products(x in comb(2), y in comb(2)) {
        prop_assert_eq!(gl_antipode(&gl_product(&x, &y)), gl_product(&gl_antipode(&y), &gl_antipode(&x)));
    }

    #[test]
    fn projection_lands_in_primitives(x in comb(4)) {
        let p = primitive_projection(&x.filter(|f| !f.is_unit()));
        prop_assert!(reduced_coproduct(&p).is_zero());
        prop_assert_eq!(primitive_projection(&p), p);
    }

    #[test]
    fn phi_inverts(x in comb(4)) {
        prop_assert_eq!(phi_inverse(&phi(&x)), x.clone());
        prop_assert_eq!(phi(&phi_inverse(&x)), x);
    }

    #[test]
    fn grafting_is_bilinear(x in comb(2), y in comb(2), z in comb(2)) {
        prop_assert_eq!(left_graft(&x, &(&y + &z)), left_graft(&x, &y) + left_graft(&x, &z));
        let lhs: Comb<Forest> = left_graft(&(&x + &y), &z);
        prop_assert_eq!(lhs, left_graft(&x, &z) + left_graft(&y, &z));
    }
}
