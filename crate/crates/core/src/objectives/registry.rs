//! The classical suite, the CEC-style bases, and the C1..C30 constructions.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::{
    composition_equal, hybrid_compose, BaseFunction, Bounds, KnownMinimum, ObjectiveSpec,
    Partition, TransformMode,
};
use crate::error::{Error, Result};
use crate::rng::child_seed;

const TRANSFORM_MASTER: u64 = 0x0e05_a017;
const SUITE_DIM: usize = 30;

/// Classical ids backing CEC01..CEC14.
const CEC_BASES: [&str; 14] = [
    "F4", "F38", "F44", "F29", "F27", "F46", "F20", "F30", "F15", "F8", "F1", "F47", "F10", "F14",
];

struct Registry {
    ordered: Vec<ObjectiveSpec>,
    index: HashMap<String, usize>,
}

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| {
        let ordered = build().expect("built-in registry is well formed");
        let index = ordered
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.to_ascii_uppercase(), i))
            .collect();
        Registry { ordered, index }
    })
}

/// Every registered function in registration order.
pub fn registry_list() -> &'static [ObjectiveSpec] {
    &registry().ordered
}

/// Case-insensitive lookup by id.
pub fn lookup(id: &str) -> Result<&'static ObjectiveSpec> {
    let reg = registry();
    reg.index
        .get(&id.trim().to_ascii_uppercase())
        .map(|&i| &reg.ordered[i])
        .ok_or_else(|| Error::UnknownFunction(id.to_string()))
}

/// CSV dump: `id,name,dim,lower,upper,known_min,tags`.
pub fn registry_csv() -> String {
    let mut out = String::from("id,name,dim,lower,upper,known_min,tags\n");
    for s in registry_list() {
        let min = s
            .instantiate_default()
            .ok()
            .and_then(|o| o.known_minimum())
            .map_or_else(|| "unknown".to_string(), |v| format!("{v}"));
        out.push_str(&format!(
            "{},\"{}\",{},{},{},{},{}\n",
            s.id,
            s.name,
            s.default_dimension,
            s.bounds.lower,
            s.bounds.upper,
            min,
            s.tag_code()
        ));
    }
    out
}

fn b(lo: f64, hi: f64) -> Bounds {
    Bounds {
        lower: lo,
        upper: hi,
    }
}

fn zero() -> KnownMinimum {
    KnownMinimum::Constant(0.0)
}

fn build() -> Result<Vec<ObjectiveSpec>> {
    use BaseFunction::*;
    let n = SUITE_DIM;
    let wide = b(-100.0, 100.0);
    let u = KnownMinimum::Unknown;

    let mut out: Vec<ObjectiveSpec> = Vec::new();
    let base = |id: &str, name: &str, f, dim, bounds, min, tags: &str| {
        ObjectiveSpec::base(id, name, f, dim, bounds, min, tags)
    };

    out.push(base(
        "F1",
        "Ackley",
        Ackley,
        30,
        b(-32.0, 32.0),
        zero(),
        "MN",
    ));
    out.push(base(
        "F2",
        "Alpine",
        Alpine,
        n,
        b(-10.0, 10.0),
        zero(),
        "MN",
    ));
    out.push(base("F3", "Brown", Brown, n, b(-1.0, 4.0), zero(), "UN"));
    out.push(base("F4", "Bent Cigar", BentCigar, n, wide, zero(), "MS"));
    // F5/F6 are filled in below once their parts exist
    out.push(base(
        "F7",
        "Dixon and Price",
        DiscusProduct,
        30,
        b(-10.0, 10.0),
        zero(),
        "UN",
    ));
    out.push(base("F8", "Discus", DixonPrice, n, wide, zero(), "U"));
    out.push(base(
        "F9",
        "Fletcher-Powell",
        FletcherPowell,
        3,
        wide,
        KnownMinimum::Constant(0.0001),
        "MN",
    ));
    out.push(base(
        "F10",
        "Griewank",
        Griewank,
        30,
        b(-600.0, 600.0),
        zero(),
        "MN",
    ));
    out.push(base(
        "F11",
        "Generalized Penalized 1",
        Penalized1,
        n,
        b(-50.0, 50.0),
        zero(),
        "M",
    ));
    out.push(base(
        "F12",
        "Generalized Penalized 2",
        Penalized2,
        n,
        b(-5.12, 5.12),
        zero(),
        "M",
    ));
    out.push(base("F13", "Holzman 2", Holzman2, n, wide, zero(), ""));
    out.push(base("F14", "HGBat", HgBat, 30, wide, zero(), "M"));
    out.push(base(
        "F15",
        "High Conditioned Elliptic",
        HighConditionedElliptic,
        n,
        wide,
        zero(),
        "",
    ));
    out.push(base(
        "F18",
        "Inverted Cosine Mixture",
        InvertedCosineMixture,
        n,
        b(-1.0, 1.0),
        KnownMinimum::PerDimension(-0.1),
        "MS",
    ));
    out.push(base("F19", "Levy 3", Levy3, n, b(-10.0, 10.0), zero(), ""));
    out.push(base("F20", "Levy", Levy, 2, b(-10.0, 10.0), zero(), "MN"));
    out.push(base(
        "F21",
        "Levy and Montalvo",
        LevyMontalvo,
        n,
        b(-5.0, 5.0),
        zero(),
        "MS",
    ));
    out.push(base("F22", "Noise", Noise, n, b(-1.28, 1.28), u, ""));
    out.push(base("F23", "Pathological", Pathological, n, wide, u, "MN"));
    out.push(base("F24", "Perm", Perm, n, b(-20.0, 20.0), zero(), "MN"));
    out.push(base("F25", "Powell", Powell, 4, b(-4.0, 5.0), zero(), "UN"));
    out.push(base(
        "F26",
        "Quartic",
        Quartic,
        30,
        b(-128.0, 128.0),
        zero(),
        "MS",
    ));
    out.push(base(
        "F27",
        "Rastrigin",
        Rastrigin,
        30,
        b(-5.12, 5.12),
        zero(),
        "MN",
    ));
    out.push(base(
        "F28",
        "Rotated Hyper-Ellipsoid",
        RotatedHyperEllipsoid,
        n,
        wide,
        zero(),
        "U",
    ));
    out.push(base(
        "F29",
        "Rosenbrock",
        Rosenbrock,
        30,
        b(-30.0, 30.0),
        zero(),
        "UN",
    ));
    out.push(base(
        "F30",
        "Schwefel 2.26",
        Schwefel226,
        n,
        b(-500.0, 500.0),
        KnownMinimum::PerDimension(-418.983),
        "MS",
    ));
    out.push(base(
        "F31",
        "Schwefel 1.2",
        Schwefel12,
        30,
        wide,
        zero(),
        "UN",
    ));
    out.push(base(
        "F32",
        "Schwefel 2.22",
        Schwefel222,
        30,
        wide,
        zero(),
        "UN",
    ));
    out.push(base(
        "F33",
        "Schwefel 2.21",
        Schwefel221,
        n,
        wide,
        zero(),
        "US",
    ));
    out.push(base("F34", "Sphere", Sphere, 30, wide, zero(), "US"));
    out.push(base("F35", "Step", Step, 30, wide, zero(), "US"));
    out.push(base(
        "F36",
        "Sum Squares",
        SumSquares,
        30,
        b(-10.0, 10.0),
        zero(),
        "US",
    ));
    out.push(base(
        "F37",
        "Sum Power",
        SumPower,
        n,
        b(-1.0, 1.0),
        zero(),
        "US",
    ));
    out.push(base(
        "F38",
        "Sum of Different Powers",
        SumDifferentPowers,
        n,
        wide,
        zero(),
        "US",
    ));
    out.push(base("F44", "Wavy 1", ZakharovForm, 2, wide, zero(), "MS"));
    out.push(base(
        "F45",
        "Zakharov",
        WavyForm,
        10,
        b(-5.0, 10.0),
        zero(),
        "UN",
    ));
    out.push(base("F46", "Salomon", Salomon, n, wide, zero(), "MN"));
    out.push(base(
        "F47",
        "Weierstrass",
        Weierstrass,
        50,
        b(-0.5, 0.5),
        zero(),
        "MN",
    ));

    let find = |list: &[ObjectiveSpec], id: &str| -> ObjectiveSpec {
        list.iter()
            .find(|s| s.id == id)
            .cloned()
            .unwrap_or_else(|| panic!("registry references missing {id}"))
    };
    let seed = |id: &str| child_seed(TRANSFORM_MASTER, id);

    let f5 = composition_equal(&[find(&out, "F29"), find(&out, "F15"), find(&out, "F27")])?
        .with_id("F5", "Composition 1")
        .with_bounds(wide)
        .with_default_dimension(5);
    let f6 = composition_equal(&[
        find(&out, "F1"),
        find(&out, "F15"),
        find(&out, "F10"),
        find(&out, "F27"),
    ])?
    .with_id("F6", "Composition 2")
    .with_bounds(wide)
    .with_default_dimension(3);
    let f16 = hybrid_compose(
        &[find(&out, "F45"), find(&out, "F29"), find(&out, "F27")],
        Partition::Equal,
    )?
    .with_id("F16", "Hybrid 1")
    .with_bounds(wide)
    .with_tags("UN");
    let f17 = hybrid_compose(
        &[
            find(&out, "F15"),
            find(&out, "F1"),
            find(&out, "F27"),
            find(&out, "F14"),
            find(&out, "F8"),
        ],
        Partition::Equal,
    )?
    .with_id("F17", "Hybrid 2")
    .with_bounds(wide)
    .with_tags("MN");

    let sr = |list: &[ObjectiveSpec], id: &str, base_id: &str, tags: &str| {
        let base = find(list, base_id);
        let name = format!("Shifted and Rotated {}", base.name);
        ObjectiveSpec::transformed(&base, TransformMode::ShiftRotate, seed(id))
            .with_id(id, &name)
            .with_bounds(wide)
            .with_default_dimension(SUITE_DIM)
            .with_tags(tags)
    };
    let f39 = sr(&out, "F39", "F4", "");
    let f40 = sr(&out, "F40", "F38", "");
    let f41 = sr(&out, "F41", "F45", "");
    let f42 = sr(&out, "F42", "F29", "MN");
    let f43 = sr(&out, "F43", "F27", "MS");

    out.extend([f5, f6, f16, f17, f39, f40, f41, f42, f43]);
    out.sort_by_key(|s| s.id[1..].parse::<u32>().unwrap_or(u32::MAX));

    // CEC-style bases
    let mut cec = Vec::with_capacity(CEC_BASES.len());
    for (i, fid) in CEC_BASES.iter().enumerate() {
        let src = find(&out, fid);
        let id = format!("CEC{:02}", i + 1);
        let name = format!("{} ({fid})", src.name);
        cec.push(src.with_id(&id, &name).with_default_dimension(SUITE_DIM));
    }

    let mut cs: Vec<ObjectiveSpec> = Vec::with_capacity(30);
    let mk = |cid: &str, mode: TransformMode, base: &ObjectiveSpec| {
        let label = if mode == TransformMode::Shift {
            "S"
        } else {
            "SR"
        };
        ObjectiveSpec::transformed(base, mode, seed(cid))
            .with_id(cid, &format!("{label} {}", base.id))
            .with_default_dimension(SUITE_DIM)
    };
    use TransformMode::{Shift, ShiftRotate};
    let c = |k: usize| &cec[k - 1];
    for k in 1..=8 {
        cs.push(mk(&format!("C{k}"), Shift, c(k)));
    }
    cs.push(mk("C9", ShiftRotate, c(8)));
    cs.push(mk("C10", Shift, c(9)));
    for k in 11..=16 {
        cs.push(mk(&format!("C{k}"), ShiftRotate, c(k - 2)));
    }

    let shifted_hybrid: [(&str, &[usize]); 6] = [
        ("C17", &[9, 8, 1]),
        ("C18", &[2, 12, 8]),
        ("C19", &[7, 6, 4, 14]),
        ("C20", &[12, 3, 13, 8]),
        ("C21", &[14, 12, 4, 9, 1]),
        ("C22", &[10, 11, 13, 9, 5]),
    ];
    for (cid, parts) in shifted_hybrid {
        let parts: Vec<ObjectiveSpec> = parts.iter().map(|&k| c(k).clone()).collect();
        let hybrid = hybrid_compose(&parts, Partition::Equal)?.with_bounds(wide);
        let names: Vec<&str> = parts.iter().map(|p| p.id.as_str()).collect();
        cs.push(
            ObjectiveSpec::transformed(&hybrid, Shift, seed(cid))
                .with_id(cid, &format!("S [{}]", names.join(", ")))
                .with_default_dimension(SUITE_DIM),
        );
    }

    let hybrids_of_c: [(&str, &[usize]); 8] = [
        ("C23", &[4, 1, 2, 3, 1]),
        ("C24", &[10, 9, 14]),
        ("C25", &[11, 9, 1]),
        ("C26", &[11, 13, 1, 6, 7]),
        ("C27", &[14, 9, 11, 6, 1]),
        ("C28", &[15, 13, 13, 11, 16, 1]),
        ("C29", &[17, 18, 19]),
        ("C30", &[20, 21, 22]),
    ];
    for (cid, parts) in hybrids_of_c {
        let parts: Vec<ObjectiveSpec> = parts.iter().map(|&k| cs[k - 1].clone()).collect();
        let names: Vec<&str> = parts.iter().map(|p| p.id.as_str()).collect();
        cs.push(
            hybrid_compose(&parts, Partition::Equal)?
                .with_id(cid, &format!("H [{}]", names.join(", ")))
                .with_bounds(wide)
                .with_default_dimension(SUITE_DIM),
        );
    }

    out.extend(cec);
    out.extend(cs);
    Ok(out)
}
