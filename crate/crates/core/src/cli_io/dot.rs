use std::fmt::Write;

use crate::group_core::Elem;
use crate::shift_space::Shift;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The transition graph on the first `bound` letters. Followers outside that
/// range are drawn as dashed frontier nodes and are not expanded.
pub fn emit_dot(name: &str, shift: &Shift, bound: usize) -> String {
    let letters = shift.alphabet.enumerate(bound);
    let mut frontier: Vec<Elem> = Vec::new();
    let mut edges: Vec<(usize, String)> = Vec::new();
    for (i, a) in letters.iter().enumerate() {
        for b in shift.followers_listed(a, bound) {
            let id = match letters.iter().position(|x| *x == b) {
                Some(j) => format!("n{j}"),
                None => {
                    let j = frontier.iter().position(|x| *x == b).unwrap_or_else(|| {
                        frontier.push(b.clone());
                        frontier.len() - 1
                    });
                    format!("f{j}")
                }
            };
            edges.push((i, id));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  // bound {bound}, {} letters expanded", letters.len());
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for (i, a) in letters.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label={}];", quote(&a.to_string()));
    }
    for (j, b) in frontier.iter().enumerate() {
        let _ = writeln!(out, "  f{j} [label={}, style=dashed];", quote(&b.to_string()));
    }
    for (i, id) in edges {
        let _ = writeln!(out, "  n{i} -> {id};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_io::fixture;

    fn out_degrees(dot: &str, nodes: usize) -> Vec<usize> {
        (0..nodes).map(|i| dot.lines().filter(|l| l.trim_start().starts_with(&format!("n{i} -> "))).count()).collect()
    }

    #[test]
    fn prufer_nodes_have_two_followers() {
        let dot = emit_dot("prufer", &fixture("prufer_fractal"), 7);
        assert_eq!(out_degrees(&dot, 7), vec![2; 7]);
        assert!(dot.contains("style=dashed"));
    }

    #[test]
    fn z4_graph() {
        let dot = emit_dot("z4", &fixture("z4_coset"), 64);
        assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 4);
        assert_eq!(out_degrees(&dot, 4), vec![2; 4]);
        assert!(!dot.contains("dashed"));
    }

    #[test]
    fn identity_shift_has_self_loops() {
        let dot = emit_dot("id", &fixture("identity_z2"), 64);
        assert!(dot.contains("n0 -> n0;") && dot.contains("n1 -> n1;"));
        assert_eq!(dot.matches(" -> ").count(), 2);
    }

    #[test]
    fn same_input_same_text() {
        let s = fixture("parity");
        assert_eq!(emit_dot("p", &s, 9), emit_dot("p", &s, 9));
    }
}
