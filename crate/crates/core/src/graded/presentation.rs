use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::expr::parse_expr;
use super::{AlgebraWindow, Basis, GradedAlgebra, Homog};
use crate::error::{Error, Result};
use crate::exactla::Fp;

pub const DEFAULT_WINDOW: i64 = 12;
const MAX_REWRITE_DEPTH: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

pub type GeneratorSpec = Generator;

/// `lhs -> sum c * word`, words as generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Vec<usize>,
    pub rhs: Vec<(u32, Vec<usize>)>,
}

/// JSON form of a presentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationSpec {
    #[serde(rename = "char")]
    pub characteristic: u32,
    pub generators: Vec<Generator>,
    /// `[lhs, rhs]` pairs: a monomial and the expression it rewrites to.
    #[serde(default)]
    pub relations: Vec<(String, String)>,
    #[serde(default)]
    pub graded_commutative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
}

/// Finitely presented graded algebra `k<gens>/(rules)`, materialised in
/// degrees `[0, window]` by normal forms.
#[derive(Clone, Debug)]
pub struct GradedAlgebraPresentation {
    spec: PresentationSpec,
    field: Fp,
    rules: Vec<Rule>,
    words: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<usize>, Basis>,
    table: AlgebraWindow,
}

struct Rewriter<'a> {
    field: Fp,
    degrees: &'a [i64],
    rules: &'a [Rule],
    memo: HashMap<Vec<usize>, Vec<(Vec<usize>, u32)>>,
    active: HashSet<Vec<usize>>,
    max_len: usize,
}

impl Rewriter<'_> {
    fn find(&self, w: &[usize]) -> Option<(usize, &Rule)> {
        for pos in 0..w.len() {
            for r in self.rules {
                if w[pos..].starts_with(&r.lhs) {
                    return Some((pos, r));
                }
            }
        }
        None
    }

    fn nf(&mut self, w: &[usize]) -> Result<Vec<(Vec<usize>, u32)>> {
        self.nf_at(w, 0)
    }

    fn nf_at(&mut self, w: &[usize], depth: usize) -> Result<Vec<(Vec<usize>, u32)>> {
        if let Some(v) = self.memo.get(w) {
            return Ok(v.clone());
        }
        if depth > MAX_REWRITE_DEPTH || w.len() > self.max_len {
            return Err(Error::NonTerminating(format!("while reducing a word of length {}", w.len())));
        }
        let (pos, rhs, len) = match self.find(w) {
            None => return Ok(vec![(w.to_vec(), 1)]),
            Some((pos, rule)) => (pos, rule.rhs.clone(), rule.lhs.len()),
        };
        if !self.active.insert(w.to_vec()) {
            return Err(Error::NonTerminating(format!("rewriting cycles through {w:?}")));
        }
        let f = self.field;
        let mut acc: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
        for (c, rw) in rhs {
            let mut next = w[..pos].to_vec();
            next.extend_from_slice(&rw);
            next.extend_from_slice(&w[pos + len..]);
            for (x, cx) in self.nf_at(&next, depth + 1)? {
                let e = acc.entry(x).or_insert(0);
                *e = f.addm(*e, f.mulm(c, cx));
            }
        }
        let out: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        self.active.remove(w);
        self.memo.insert(w.to_vec(), out.clone());
        Ok(out)
    }

    fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&g| self.degrees[g]).sum()
    }

    /// Critical pairs up to degree `max`: overlaps and inclusions of
    /// left-hand sides must resolve to the same normal form.
    fn check_confluence(&mut self, max: i64) -> Result<()> {
        let rules = self.rules;
        for (i, r1) in rules.iter().enumerate() {
            for (j, r2) in rules.iter().enumerate() {
                let (l1, l2) = (&r1.lhs, &r2.lhs);
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let mut w = l1.clone();
                        w.extend_from_slice(&l2[k..]);
                        if self.word_degree(&w) > max {
                            continue;
                        }
                        self.compare(&w, (0, r1), (l1.len() - k, r2))?;
                    }
                }
                if i != j && l2.len() <= l1.len() {
                    for pos in 0..=l1.len() - l2.len() {
                        if l1[pos..pos + l2.len()] == l2[..] && self.word_degree(l1) <= max {
                            self.compare(l1, (0, r1), (pos, r2))?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn apply(&mut self, w: &[usize], pos: usize, r: &Rule) -> Result<BTreeMap<Vec<usize>, u32>> {
        let f = self.field;
        let mut acc = BTreeMap::new();
        for (c, rw) in &r.rhs {
            let mut next = w[..pos].to_vec();
            next.extend_from_slice(rw);
            next.extend_from_slice(&w[pos + r.lhs.len()..]);
            for (x, cx) in self.nf(&next)? {
                let e = acc.entry(x).or_insert(0);
                *e = f.addm(*e, f.mulm(*c, cx));
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(acc)
    }

    fn compare(&mut self, w: &[usize], a: (usize, &Rule), b: (usize, &Rule)) -> Result<()> {
        let x = self.apply(w, a.0, a.1)?;
        let y = self.apply(w, b.0, b.1)?;
        if x != y {
            return Err(Error::NotConfluent(format!(
                "overlap word {w:?} resolves to {x:?} and {y:?}"
            )));
        }
        Ok(())
    }
}

impl GradedAlgebraPresentation {
    pub fn from_spec(spec: &PresentationSpec) -> Result<Self> {
        let field = Fp::new(spec.characteristic)?;
        let window = spec.window.unwrap_or(DEFAULT_WINDOW);
        if window < 0 {
            return Err(Error::invalid("window must be non-negative"));
        }
        let n = spec.generators.len();
        let mut names: HashMap<&str, usize> = HashMap::new();
        for (i, g) in spec.generators.iter().enumerate() {
            if g.degree < 0 {
                return Err(Error::invalid(format!("generator {} has negative degree", g.name)));
            }
            if g.name.is_empty() || names.insert(g.name.as_str(), i).is_some() {
                return Err(Error::invalid(format!("duplicate or empty generator name {:?}", g.name)));
            }
        }
        let degrees: Vec<i64> = spec.generators.iter().map(|g| g.degree).collect();
        let word_deg = |w: &[usize]| w.iter().map(|&g| degrees[g]).sum::<i64>();
        let to_word = |m: &super::Monomial| -> Result<Vec<usize>> {
            let mut w = Vec::new();
            for (name, e) in m {
                let g = *names
                    .get(name.as_str())
                    .ok_or_else(|| Error::invalid(format!("unknown generator {name}")))?;
                w.extend(std::iter::repeat_n(g, *e as usize));
            }
            Ok(w)
        };

        let mut rules = Vec::new();
        for (lhs, rhs) in &spec.relations {
            let l = parse_expr(lhs)?;
            if l.len() != 1 || l[0].coeff != 1 || l[0].monomial.is_empty() {
                return Err(Error::invalid(format!("relation left side {lhs:?} must be a monomial")));
            }
            let lw = to_word(&l[0].monomial)?;
            let d = word_deg(&lw);
            let mut r = Vec::new();
            for t in parse_expr(rhs)? {
                let c = field.reduce_i64(t.coeff);
                if c == 0 {
                    continue;
                }
                let w = to_word(&t.monomial)?;
                if word_deg(&w) != d {
                    return Err(Error::invalid(format!("relation {lhs} -> {rhs} is not homogeneous")));
                }
                r.push((c, w));
            }
            rules.push(Rule { lhs: lw, rhs: r });
        }
        if spec.graded_commutative {
            let has = |rules: &[Rule], w: &[usize]| rules.iter().any(|r| r.lhs == w);
            for j in 0..n {
                for i in 0..j {
                    let lhs = vec![j, i];
                    if !has(&rules, &lhs) {
                        let s = field.sign(degrees[i] * degrees[j]);
                        rules.push(Rule {
                            lhs,
                            rhs: vec![(s, vec![i, j])],
                        });
                    }
                }
            }
            if field.p() != 2 {
                for i in 0..n {
                    if degrees[i] % 2 != 0 && !has(&rules, &[i, i]) {
                        rules.push(Rule {
                            lhs: vec![i, i],
                            rhs: vec![],
                        });
                    }
                }
            }
        }

        let has_degree_zero = degrees.contains(&0);
        let max_len = if has_degree_zero {
            (4 * window + 16) as usize
        } else {
            window.max(1) as usize + 2
        };
        let mut rw = Rewriter {
            field,
            degrees: &degrees,
            rules: &rules,
            memo: HashMap::new(),
            active: HashSet::new(),
            max_len: max_len * 2 + 8,
        };
        rw.check_confluence(window)?;

        // Irreducible words by depth-first extension: a word is irreducible
        // iff its prefix is and no left-hand side is a suffix.
        let mut words: Vec<Vec<Vec<usize>>> = vec![Vec::new(); window as usize + 1];
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            let d = word_deg(&w);
            words[d as usize].push(w.clone());
            for g in 0..n {
                if d + degrees[g] > window {
                    continue;
                }
                let mut next = w.clone();
                next.push(g);
                if rules.iter().any(|r| next.ends_with(&r.lhs)) {
                    continue;
                }
                if next.len() > max_len {
                    return Err(Error::invalid(
                        "degree zero generators span an infinite-dimensional component",
                    ));
                }
                stack.push(next);
            }
        }
        for ws in &mut words {
            ws.sort();
        }
        let mut index = HashMap::new();
        for (d, ws) in words.iter().enumerate() {
            for (i, w) in ws.iter().enumerate() {
                index.insert(w.clone(), Basis::new(d as i64, i));
            }
        }
        let labels = words
            .iter()
            .map(|ws| ws.iter().map(|w| word_label(&spec.generators, w)).collect())
            .collect();
        let mut table = AlgebraWindow::new(field, 0, window, labels, Basis::new(0, 0))?;
        for da in 0..=window {
            for db in 0..=window - da {
                for (i, a) in words[da as usize].iter().enumerate() {
                    for (j, b) in words[db as usize].iter().enumerate() {
                        let mut ab = a.clone();
                        ab.extend_from_slice(b);
                        let mut h = Homog::zero(da + db, words[(da + db) as usize].len());
                        for (x, c) in rw.nf(&ab)? {
                            h.coeffs[index[&x].idx] = c;
                        }
                        table.set_product(Basis::new(da, i), Basis::new(db, j), h)?;
                    }
                }
            }
        }
        Ok(GradedAlgebraPresentation {
            spec: spec.clone(),
            field,
            rules,
            words,
            index,
            table,
        })
    }

    pub fn spec(&self) -> &PresentationSpec {
        &self.spec
    }

    pub fn window(&self) -> i64 {
        self.words.len() as i64 - 1
    }

    pub fn generators(&self) -> &[Generator] {
        &self.spec.generators
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn table(&self) -> &AlgebraWindow {
        &self.table
    }

    pub fn word(&self, b: Basis) -> Option<&[usize]> {
        self.words.get(b.deg as usize)?.get(b.idx).map(|w| w.as_slice())
    }

    pub fn basis_of_word(&self, w: &[usize]) -> Option<Basis> {
        self.index.get(w).copied()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.spec.generators.iter().position(|g| g.name == name)
    }

    /// The image of a generator; it may reduce to a combination.
    pub fn generator_element(&self, g: usize) -> Result<Homog> {
        let gen = self
            .spec
            .generators
            .get(g)
            .ok_or_else(|| Error::invalid("generator index"))?;
        self.element(&gen.name)
    }

    /// Evaluates an expression in the generators.
    pub fn element(&self, expr: &str) -> Result<Homog> {
        self.element_in_degree(expr, None)
    }

    pub fn element_in_degree(&self, expr: &str, deg: Option<i64>) -> Result<Homog> {
        let f = self.field;
        let mut out: Option<Homog> = deg.map(|d| self.dim(d).map(|n| Homog::zero(d, n))).transpose()?;
        for t in parse_expr(expr)? {
            let c = f.reduce_i64(t.coeff);
            let mut acc = super::unit_element(self)?;
            for (name, e) in &t.monomial {
                let g = self
                    .generator_index(name)
                    .ok_or_else(|| Error::invalid(format!("unknown generator {name}")))?;
                let gen = &self.spec.generators[g];
                let b = Basis::new(gen.degree, 0);
                let word = vec![g];
                let gb = self.index.get(&word).copied();
                for _ in 0..*e {
                    let gh = match gb {
                        Some(b) => Homog::basis(b, self.dim(b.deg)?),
                        None => {
                            // The generator itself is reducible.
                            let mut rw = self.rewriter();
                            let mut h = Homog::zero(b.deg, self.dim(b.deg)?);
                            for (x, cx) in rw.nf(&word)? {
                                h.coeffs[self.index[&x].idx] = cx;
                            }
                            h
                        }
                    };
                    acc = super::mul(self, &acc, &gh)?;
                }
            }
            match &mut out {
                None => out = Some(acc.scaled(f, c)),
                Some(o) => {
                    if o.deg != acc.deg && !acc.is_zero() && c != 0 {
                        return Err(Error::invalid(format!("expression {expr:?} is not homogeneous")));
                    }
                    if o.deg == acc.deg {
                        o.add_scaled(f, c, &acc)?;
                    }
                }
            }
        }
        out.ok_or_else(|| Error::invalid("empty expression"))
    }

    fn rewriter(&self) -> Rewriter<'_> {
        Rewriter {
            field: self.field,
            degrees: &[],
            rules: &self.rules,
            memo: HashMap::new(),
            active: HashSet::new(),
            max_len: usize::MAX,
        }
    }
}

fn word_label(gens: &[Generator], w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let name = &gens[w[i]].name;
        parts.push(if j - i == 1 {
            name.clone()
        } else {
            format!("{name}^{}", j - i)
        });
        i = j;
    }
    parts.join("*")
}

impl GradedAlgebra for GradedAlgebraPresentation {
    fn field(&self) -> Fp {
        self.field
    }
    fn dim(&self, deg: i64) -> Result<usize> {
        self.table.dim(deg)
    }
    fn mul_basis(&self, a: Basis, b: Basis) -> Result<Homog> {
        self.table.mul_basis(a, b)
    }
    fn unit(&self) -> Basis {
        Basis::new(0, 0)
    }
    fn label(&self, b: Basis) -> String {
        self.table.label(b)
    }
    fn bounds(&self) -> (Option<i64>, Option<i64>) {
        (Some(0), Some(self.window()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{check_associative, check_graded_commutative};

    fn spec(p: u32, gens: &[(&str, i64)], rels: &[(&str, &str)], gc: bool, w: i64) -> PresentationSpec {
        PresentationSpec {
            characteristic: p,
            generators: gens
                .iter()
                .map(|(n, d)| Generator {
                    name: n.to_string(),
                    degree: *d,
                })
                .collect(),
            relations: rels.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            graded_commutative: gc,
            window: Some(w),
        }
    }

    #[test]
    fn exterior_times_polynomial() {
        let s = spec(3, &[("X", 1), ("Y", 2)], &[("X*X", "0")], true, 10);
        let a = GradedAlgebraPresentation::from_spec(&s).unwrap();
        for d in 0..=10 {
            assert_eq!(a.dim(d).unwrap(), 1, "degree {d}");
        }
        assert_eq!(a.label(Basis::new(5, 0)), "X*Y^2");
        let yx = a.element("Y*X").unwrap();
        assert_eq!(yx, a.element("X*Y").unwrap());
        assert!(a.element("X*Y*X").unwrap().is_zero());
        assert!(check_associative(&a, 0, 10).unwrap().is_empty());
        assert!(check_graded_commutative(&a, 0, 10).unwrap().is_empty());
        assert!(a.dim(11).unwrap_err().is_overflow());
    }

    #[test]
    fn detects_non_confluence() {
        // a*b -> c and b*c -> a overlap on a*b*c without resolving.
        let s = spec(5, &[("a", 1), ("b", 1), ("c", 2)], &[("a*b", "c"), ("b*c", "a*a*b")], false, 6);
        assert!(matches!(
            GradedAlgebraPresentation::from_spec(&s),
            Err(Error::NotConfluent(_))
        ));
    }

    #[test]
    fn detects_non_termination() {
        let s = spec(5, &[("a", 1), ("b", 1)], &[("a*b", "b*a"), ("b*a", "a*b")], false, 4);
        assert!(matches!(
            GradedAlgebraPresentation::from_spec(&s),
            Err(Error::NonTerminating(_))
        ));
    }

    #[test]
    fn rejects_inhomogeneous_relation() {
        let s = spec(5, &[("a", 1), ("b", 2)], &[("a*a", "a")], false, 4);
        assert!(GradedAlgebraPresentation::from_spec(&s).is_err());
    }

    #[test]
    fn free_algebra_dimensions() {
        let s = spec(2, &[("a", 1), ("b", 1)], &[], false, 5);
        let a = GradedAlgebraPresentation::from_spec(&s).unwrap();
        for d in 0..=5 {
            assert_eq!(a.dim(d).unwrap(), 1 << d);
        }
    }

    #[test]
    fn degree_zero_idempotents() {
        let s = spec(3, &[("e", 0)], &[("e*e", "e")], false, 3);
        let a = GradedAlgebraPresentation::from_spec(&s).unwrap();
        assert_eq!(a.dim(0).unwrap(), 2);
        let s = spec(3, &[("e", 0)], &[], false, 3);
        assert!(GradedAlgebraPresentation::from_spec(&s).is_err());
    }
}
