use std::sync::LazyLock;

use hurwitz::group::{parse_group_spec, Group, GroupElement};
use proptest::prelude::*;

static SYM5: LazyLock<Group> = LazyLock::new(|| parse_group_spec("Sym:5").unwrap());
static ALT6: LazyLock<Group> = LazyLock::new(|| parse_group_spec("Alt:6").unwrap());

proptest! {
    #[test]
    fn group_axioms_sym5(x in 0u32..120, y in 0u32..120, z in 0u32..120) {
        let g = &*SYM5;
        let (x, y, z) = (GroupElement(x), GroupElement(y), GroupElement(z));
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
        prop_assert_eq!(g.conjugate(g.mul(x, y), z), g.mul(g.conjugate(x, z), g.conjugate(y, z)));
        prop_assert_eq!(g.element_order(g.conjugate(x, y)), g.element_order(x));
    }

    #[test]
    fn abelian_normalisation_keeps_order(m in proptest::collection::vec(1u64..40, 1..4)) {
        let spec = format!("Zn:{}", m.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
        let g = parse_group_spec(&spec).unwrap();
        prop_assert_eq!(g.order() as u64, m.iter().product::<u64>());
        let moduli = g.moduli().unwrap().to_vec();
        // invariant factors divide one another
        prop_assert!(moduli.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn labels_roundtrip_alt6(x in 0u32..360) {
        let g = &*ALT6;
        let x = GroupElement(x);
        prop_assert_eq!(g.parse_element(&g.label(x)), Some(x));
    }
}
