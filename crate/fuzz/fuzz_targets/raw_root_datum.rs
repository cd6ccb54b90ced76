#![no_main]

use libfuzzer_sys::fuzz_target;
use satake_core::weyl::enumerate_weyl;
use satake_core::{CartanType, Family, RootDatum};

const FAMILIES: [Family; 7] = [
    Family::A,
    Family::B,
    Family::C,
    Family::D,
    Family::E,
    Family::F,
    Family::G,
];

// Layout: family, rank, lattice rank, then roots and coroots as signed bytes.
fuzz_target!(|data: &[u8]| {
    if data.len() < 3 {
        return;
    }
    let family = FAMILIES[data[0] as usize % FAMILIES.len()];
    let rank = 1 + data[1] as usize % 4;
    let d = 1 + data[2] as usize % 5;
    let Ok(ty) = CartanType::new(family, rank) else {
        return;
    };
    let mut vals = data[3..].iter().map(|&b| b as i8 as i64);
    let mut take = || -> Option<Vec<Vec<i64>>> {
        (0..rank)
            .map(|_| (0..d).map(|_| vals.next()).collect::<Option<Vec<_>>>())
            .collect()
    };
    let (Some(roots), Some(coroots)) = (take(), take()) else {
        return;
    };
    if let Ok(datum) = RootDatum::from_raw(ty, roots, coroots) {
        let _ = enumerate_weyl(&datum, 2_000);
    }
});
