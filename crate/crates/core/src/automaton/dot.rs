use super::{Lta, Transition};
use std::fmt::Write;

impl Lta {
    /// Graphviz rendering. Ground transitions get an auxiliary box node
    /// linking the argument states to the target; lambda values hang off
    /// plaintext leaf nodes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lta {\n  rankdir=BT;\n");
        for q in &self.states {
            let shape = if self.is_final(q) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  \"{}\" [shape={shape}];", escape(q.name()));
        }
        for (i, t) in self.transitions.iter().enumerate() {
            match t {
                Transition::Lambda { value, target } => {
                    let _ = writeln!(out, "  leaf{i} [shape=plaintext, label=\"{}\"];", escape(&value.to_string()));
                    let _ = writeln!(out, "  leaf{i} -> \"{}\";", escape(target.name()));
                }
                Transition::Ground { head, args, target } => {
                    let _ = writeln!(out, "  t{i} [shape=box, label=\"{}\"];", escape(head.name()));
                    for (k, q) in args.iter().enumerate() {
                        let _ = writeln!(out, "  \"{}\" -> t{i} [label=\"{}\"];", escape(q.name()), k + 1);
                    }
                    let _ = writeln!(out, "  t{i} -> \"{}\";", escape(target.name()));
                }
                Transition::Epsilon { from, to } => {
                    let _ = writeln!(out, "  \"{}\" -> \"{}\" [style=dashed];", escape(from.name()), escape(to.name()));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::super::tests::running;

    #[test]
    fn dot_marks_finals_and_hyperedges() {
        let dot = running().to_dot();
        assert!(dot.contains("\"q2\" [shape=doublecircle]"));
        assert!(dot.contains("[shape=box, label=\"f\"]"));
        assert!(dot.contains("label=\"[0,4]\""));
    }
}
