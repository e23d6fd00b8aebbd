//! Built-in drift terms selectable by name.

use wisfbm::Drift64;

pub struct DriftRegistryEntry {
    pub name: &'static str,
    pub formula_doc: &'static str,
}

pub const DRIFTS: [DriftRegistryEntry; 5] = [
    DriftRegistryEntry { name: "zero", formula_doc: "a(x) = 0" },
    DriftRegistryEntry { name: "linear", formula_doc: "a(x) = x, a'(x) = 1" },
    DriftRegistryEntry { name: "quasi_rational", formula_doc: "a(x) = 4x/(1+x^2), a'(x) = 4(1-x^2)/(1+x^2)^2" },
    DriftRegistryEntry { name: "cosine", formula_doc: "a(x) = cos x, a'(x) = -sin x" },
    DriftRegistryEntry { name: "log_square", formula_doc: "a(x) = 25 log(1+x^2), a'(x) = 50x/(1+x^2)" },
];

pub fn lookup(name: &str) -> Option<Drift64> {
    Drift64::builtin(name)
}

pub fn names() -> String {
    DRIFTS.iter().map(|d| d.name).collect::<Vec<_>>().join(", ")
}
