use super::{Formula, PartialAssignment, VarName};

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Var(usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
}

/// A formula with variables replaced by dense indices into [`vars`].
///
/// Indices follow the canonical variable order, so index `i` is the
/// `i`-th smallest name. Used wherever formulas are evaluated many times
/// (truth tables, brute-force backbone extraction).
///
/// [`vars`]: IndexedFormula::vars
#[derive(Debug, Clone)]
pub struct IndexedFormula {
    vars: Vec<VarName>,
    root: Node,
}

impl IndexedFormula {
    pub fn new(f: &Formula) -> Self {
        let vars: Vec<VarName> = f.vars().into_iter().collect();
        let root = index(f, &vars);
        IndexedFormula { vars, root }
    }

    pub fn vars(&self) -> &[VarName] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub(crate) fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluates under `values[i]` for variable `i`.
    pub fn eval(&self, values: &[bool]) -> bool {
        eval(&self.root, values)
    }

    /// Evaluates with variable `i` taken from bit `i` of `mask`.
    pub fn eval_mask(&self, mask: u64) -> bool {
        eval_mask(&self.root, mask)
    }

    pub fn to_assignment(&self, values: &[bool]) -> PartialAssignment {
        self.vars.iter().cloned().zip(values.iter().copied()).collect()
    }

    pub fn mask_to_assignment(&self, mask: u64) -> PartialAssignment {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), mask >> i & 1 == 1))
            .collect()
    }
}

fn index(f: &Formula, vars: &[VarName]) -> Node {
    match f {
        Formula::Var(v) => Node::Var(vars.binary_search(v).expect("variable collected")),
        Formula::Not(c) => Node::Not(Box::new(index(c, vars))),
        Formula::And(cs) => Node::And(cs.iter().map(|c| index(c, vars)).collect()),
        Formula::Or(cs) => Node::Or(cs.iter().map(|c| index(c, vars)).collect()),
    }
}

fn eval(n: &Node, values: &[bool]) -> bool {
    match n {
        Node::Var(i) => values[*i],
        Node::Not(c) => !eval(c, values),
        Node::And(cs) => cs.iter().all(|c| eval(c, values)),
        Node::Or(cs) => cs.iter().any(|c| eval(c, values)),
    }
}

fn eval_mask(n: &Node, mask: u64) -> bool {
    match n {
        Node::Var(i) => mask >> i & 1 == 1,
        Node::Not(c) => !eval_mask(c, mask),
        Node::And(cs) => cs.iter().all(|c| eval_mask(c, mask)),
        Node::Or(cs) => cs.iter().any(|c| eval_mask(c, mask)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn agrees_with_ast_evaluation() {
        let f = parse_formula("(or (and (var b) (not (var a))) (and (var c) (var a)))").unwrap();
        let ix = IndexedFormula::new(&f);
        assert_eq!(ix.num_vars(), 3);
        for mask in 0..8u64 {
            let a = ix.mask_to_assignment(mask);
            assert_eq!(ix.eval_mask(mask), f.evaluate(&a).unwrap());
        }
    }
}
