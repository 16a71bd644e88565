use crate::error::{Error, Result};
use crate::formula::{Formula, VarName};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Clause list over variables `1..=num_vars`, DIMACS-style signed literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    /// Original formula variables; Tseitin auxiliaries are absent.
    pub origin_map: BTreeMap<VarName, u32>,
}

impl CnfFormula {
    /// Checks literal ranges and injectivity of `origin_map`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        for c in &self.clauses {
            if c.is_empty() {
                return bad("empty clause".into());
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() > self.num_vars {
                    return bad(format!("literal {l} out of range"));
                }
            }
        }
        let mut seen = vec![false; self.num_vars as usize + 1];
        for &i in self.origin_map.values() {
            if i == 0 || i > self.num_vars || std::mem::replace(&mut seen[i as usize], true) {
                return bad(format!("origin index {i} invalid or repeated"));
            }
        }
        Ok(())
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(out, "{l} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    /// Sidecar listing `index<TAB>varname`, ordered by index.
    pub fn origin_map_text(&self) -> String {
        let mut rows: Vec<(u32, &VarName)> = self.origin_map.iter().map(|(v, &i)| (i, v)).collect();
        rows.sort();
        rows.iter().map(|(i, v)| format!("{i}\t{v}\n")).collect()
    }
}

/// Reads DIMACS CNF. Comment lines (`c ...`) are skipped; clauses may span
/// lines. The result has an empty `origin_map`.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let err = |msg: &str| Error::Dimacs {
            line: i + 1,
            msg: msg.to_string(),
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let f: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || f.len() != 4 || f[1] != "cnf" {
                return Err(err("bad problem line"));
            }
            let nv = f[2].parse().map_err(|_| err("bad variable count"))?;
            let nc = f[3].parse().map_err(|_| err("bad clause count"))?;
            header = Some((nv, nc));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| err("clause before problem line"))?;
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| err("bad literal"))?;
            if l == 0 {
                if current.is_empty() {
                    return Err(err("empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() > nv {
                return Err(err("literal out of range"));
            } else {
                current.push(l);
            }
        }
    }
    let (num_vars, nc) = header.ok_or(Error::Dimacs {
        line: 0,
        msg: "missing problem line".into(),
    })?;
    if !current.is_empty() {
        return Err(Error::Dimacs {
            line: 0,
            msg: "unterminated clause".into(),
        });
    }
    if clauses.len() != nc {
        return Err(Error::Dimacs {
            line: 0,
            msg: format!("header declares {nc} clauses, found {}", clauses.len()),
        });
    }
    Ok(CnfFormula {
        num_vars,
        clauses,
        origin_map: BTreeMap::new(),
    })
}

/// Reads an `index<TAB>varname` sidecar into an origin map.
pub fn parse_origin_map(text: &str) -> Result<BTreeMap<VarName, u32>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = || Error::Dimacs {
            line: i + 1,
            msg: "expected `index<TAB>varname`".into(),
        };
        let (idx, name) = line.split_once('\t').ok_or_else(err)?;
        let idx: u32 = idx.parse().map_err(|_| err())?;
        let name: VarName = name.parse().map_err(|_| err())?;
        if map.insert(name, idx).is_some() {
            return Err(err());
        }
    }
    Ok(map)
}

/// Definitional (full biconditional) CNF translation.
///
/// Original variables take indices `1..=n` in canonical name order; each
/// `and`/`or` node gets one auxiliary after that. Negation is folded into
/// literals, so `not` nodes cost nothing.
pub fn tseitin(f: &Formula) -> CnfFormula {
    let origin_map: BTreeMap<VarName, u32> = f
        .vars()
        .into_iter()
        .zip(1u32..)
        .collect();
    let mut enc = Encoder {
        next: origin_map.len() as u32 + 1,
        origin_map: &origin_map,
        clauses: Vec::new(),
    };
    let root = enc.encode(f);
    enc.clauses.push(vec![root]);
    CnfFormula {
        num_vars: enc.next - 1,
        clauses: enc.clauses,
        origin_map,
    }
}

struct Encoder<'a> {
    next: u32,
    origin_map: &'a BTreeMap<VarName, u32>,
    clauses: Vec<Vec<i32>>,
}

impl Encoder<'_> {
    fn encode(&mut self, f: &Formula) -> i32 {
        match f {
            Formula::Var(v) => self.origin_map[v] as i32,
            Formula::Not(c) => -self.encode(c),
            Formula::And(cs) | Formula::Or(cs) => {
                let lits: Vec<i32> = cs.iter().map(|c| self.encode(c)).collect();
                let aux = self.next as i32;
                self.next += 1;
                if matches!(f, Formula::And(_)) {
                    // aux -> l_i ; (l_1 & ... & l_n) -> aux
                    let mut big = vec![aux];
                    for &l in &lits {
                        self.clauses.push(vec![-aux, l]);
                        big.push(-l);
                    }
                    self.clauses.push(big);
                } else {
                    // l_i -> aux ; aux -> (l_1 | ... | l_n)
                    let mut big = vec![-aux];
                    for &l in &lits {
                        self.clauses.push(vec![aux, -l]);
                        big.push(l);
                    }
                    self.clauses.push(big);
                }
                aux
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn single_var_is_a_unit_clause() {
        let cnf = tseitin(&parse_formula("(var x1)").unwrap());
        assert_eq!(cnf.num_vars, 1);
        assert_eq!(cnf.clauses, vec![vec![1]]);
    }

    #[test]
    fn dimacs_round_trip_and_sidecar() {
        let cnf = tseitin(&parse_formula("(and (var b) (not (var a)))").unwrap());
        cnf.validate().unwrap();
        let back = parse_dimacs(&cnf.to_dimacs()).unwrap();
        assert_eq!(back.clauses, cnf.clauses);
        assert_eq!(back.num_vars, cnf.num_vars);
        assert_eq!(cnf.origin_map_text(), "1\ta\n2\tb\n");
        assert_eq!(parse_origin_map(&cnf.origin_map_text()).unwrap(), cnf.origin_map);
    }

    #[test]
    fn dimacs_errors() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 3 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2\n").is_err());
        assert!(parse_dimacs("c hello\np cnf 2 1\n1\n-2 0\n").is_ok());
    }
}
