//! Fixtures shipped inside the binary so that bare names resolve anywhere.

pub const BUNDLED: &[(&str, &str)] = &[
    ("broken_closure.json", include_str!("../../fixtures/broken_closure.json")),
    ("full_int.json", include_str!("../../fixtures/full_int.json")),
    ("full_int_two_sided.json", include_str!("../../fixtures/full_int_two_sided.json")),
    ("full_z2.json", include_str!("../../fixtures/full_z2.json")),
    ("full_z2_one_sided.json", include_str!("../../fixtures/full_z2_one_sided.json")),
    ("group_with_zero.json", include_str!("../../fixtures/group_with_zero.json")),
    ("identity_z2.json", include_str!("../../fixtures/identity_z2.json")),
    ("incomparable_idempotents.json", include_str!("../../fixtures/incomparable_idempotents.json")),
    ("parity.json", include_str!("../../fixtures/parity.json")),
    ("periodic_closure.json", include_str!("../../fixtures/periodic_closure.json")),
    ("prufer_fractal.json", include_str!("../../fixtures/prufer_fractal.json")),
    ("truncated_z2.json", include_str!("../../fixtures/truncated_z2.json")),
    ("truncated_z3.json", include_str!("../../fixtures/truncated_z3.json")),
    ("union_groups.json", include_str!("../../fixtures/union_groups.json")),
    ("z2_second.json", include_str!("../../fixtures/z2_second.json")),
    ("z4_coset.json", include_str!("../../fixtures/z4_coset.json")),
    ("zero_divisors.json", include_str!("../../fixtures/zero_divisors.json")),
];

/// The bundled file with this name, with or without the `.json` suffix.
pub fn bundled(name: &str) -> Option<&'static str> {
    let file = std::path::Path::new(name).file_name()?.to_str()?;
    BUNDLED
        .iter()
        .find(|(n, _)| *n == file || n.strip_suffix(".json") == Some(file))
        .map(|(_, text)| *text)
}
