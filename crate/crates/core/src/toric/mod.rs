//! Line-bundle collections on toric varieties: class-group degrees of Cox
//! variables, monomial enumeration, skew categories and the Koszul report.

pub mod cone;
mod report;
mod skew;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use cone::{is_pointed_cone, q, LinearSystem, Q};

pub use report::{toric_report, PosetVerdict, Potential, PotentialEdge, ToricReport};
pub use skew::{
    is_saturated, monomial_category, projection_functor, render_monomial, skew_category, skew_category_with,
    truncated_skew_category, LengthGrading, Saturation, SkewCategory,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("invalid collection spec: {0}")]
    InvalidSpec(String),
    #[error("variable degrees do not span a pointed cone; monomial fibers may be infinite")]
    NotPointed,
    #[error("monomial search exceeded max_total_degree = {0}")]
    CapExceeded(u32),
}

/// `ℤ^free_rank ⊕ ⨁ ℤ/m_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl ClassGroup {
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Checks the length and reduces torsion coordinates.
    pub fn normalize(&self, v: &[i64]) -> Result<Vec<i64>, ToricError> {
        if v.len() != self.rank() {
            return Err(ToricError::InvalidSpec(format!(
                "element {v:?} has {} coordinates, expected {}",
                v.len(),
                self.rank()
            )));
        }
        let mut out = v.to_vec();
        for (j, &m) in self.torsion.iter().enumerate() {
            out[self.free_rank + j] = out[self.free_rank + j].rem_euclid(m as i64);
        }
        Ok(out)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(&v).expect("same shape")
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.normalize(&v).expect("same shape")
    }

    pub fn render(&self, v: &[i64]) -> String {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("O({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variable {
    pub name: String,
    pub degree: Vec<i64>,
}

fn default_cap() -> u32 {
    64
}

/// Cox-variable degrees and an ordered list of divisor classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricCollectionSpec {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
    pub variables: Vec<Variable>,
    pub collection: Vec<Vec<i64>>,
    #[serde(default = "default_cap")]
    pub max_total_degree: u32,
}

impl ToricCollectionSpec {
    pub fn new(group: ClassGroup, variables: &[(&str, Vec<i64>)], collection: Vec<Vec<i64>>) -> Self {
        ToricCollectionSpec {
            free_rank: group.free_rank,
            torsion: group.torsion,
            variables: variables
                .iter()
                .map(|(n, d)| Variable {
                    name: n.to_string(),
                    degree: d.clone(),
                })
                .collect(),
            collection,
            max_total_degree: default_cap(),
        }
    }

    pub fn group(&self) -> ClassGroup {
        ClassGroup {
            free_rank: self.free_rank,
            torsion: self.torsion.clone(),
        }
    }

    /// Shape checks; returns normalized degrees and collection entries.
    pub fn validate(&self) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>), ToricError> {
        let g = self.group();
        if let Some(m) = self.torsion.iter().find(|&&m| m < 2) {
            return Err(ToricError::InvalidSpec(format!("torsion modulus {m} is below 2")));
        }
        let mut names = std::collections::HashSet::new();
        for v in &self.variables {
            if !names.insert(v.name.as_str()) {
                return Err(ToricError::InvalidSpec(format!(
                    "duplicate variable `{}`",
                    v.name
                )));
            }
        }
        let degrees = self
            .variables
            .iter()
            .map(|v| g.normalize(&v.degree))
            .collect::<Result<Vec<_>, _>>()?;
        let collection = self
            .collection
            .iter()
            .map(|d| g.normalize(d))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, d) in collection.iter().enumerate() {
            if collection[..i].contains(d) {
                return Err(ToricError::InvalidSpec(format!(
                    "collection entry {} is repeated",
                    g.render(d)
                )));
            }
        }
        Ok((degrees, collection))
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }
}

impl fmt::Display for ToricCollectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} variables over Z^{} with torsion {:?}, {} bundles",
            self.variables.len(),
            self.free_rank,
            self.torsion,
            self.collection.len()
        )
    }
}

/// Whether the free parts of the degrees span a pointed cone.
pub fn is_pointed(spec: &ToricCollectionSpec) -> Result<bool, ToricError> {
    let (degrees, _) = spec.validate()?;
    Ok(pointed(&degrees, spec.free_rank))
}

fn pointed(degrees: &[Vec<i64>], free_rank: usize) -> bool {
    let free: Vec<Vec<i64>> = degrees.iter().map(|d| d[..free_rank].to_vec()).collect();
    is_pointed_cone(&free)
}

/// Exponent vectors of all monomials of degree `d`, ordered by total degree
/// and then by descending exponent vector.
pub fn monomials_of_degree(spec: &ToricCollectionSpec, d: &[i64]) -> Result<Vec<Vec<u32>>, ToricError> {
    let (degrees, _) = spec.validate()?;
    let d = spec.group().normalize(d)?;
    if !pointed(&degrees, spec.free_rank) {
        return Err(ToricError::NotPointed);
    }
    enumerate(&spec.group(), &degrees, &d, spec.max_total_degree)
}

pub(crate) fn enumerate(
    g: &ClassGroup,
    degrees: &[Vec<i64>],
    d: &[i64],
    cap: u32,
) -> Result<Vec<Vec<u32>>, ToricError> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(degrees.len());
    let target: Vec<i64> = d[..g.free_rank].to_vec();
    dfs(g, degrees, d, &target, cap, 0, &mut prefix, &mut out)?;
    out.sort_by(|a: &Vec<u32>, b| {
        let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
        sa.cmp(&sb).then_with(|| b.cmp(a))
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    g: &ClassGroup,
    degrees: &[Vec<i64>],
    d: &[i64],
    remaining: &[i64],
    cap: u32,
    used: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) -> Result<(), ToricError> {
    let k = prefix.len();
    let n = degrees.len();
    if k == n {
        if remaining.iter().all(|&x| x == 0) && torsion_matches(g, degrees, d, prefix) {
            out.push(prefix.clone());
        }
        return Ok(());
    }
    // real relaxation on the free part for variables k..n
    let m = n - k;
    let mut sys = LinearSystem::new(m);
    for j in 0..m {
        sys.nonneg(j);
    }
    for (c, &r) in remaining.iter().enumerate() {
        sys.eq((k..n).map(|j| q(degrees[j][c])).collect(), q(r));
    }
    let Some((lo, hi)) = sys.bounds(0) else {
        return Ok(());
    };
    let lo = lo.map_or(0, |l| ceil(&l).max(0));
    let hi = match hi {
        Some(h) => floor(&h),
        None => i64::from(cap - used) + 1,
    };
    for t in lo..=hi {
        if used as i64 + t > cap as i64 {
            return Err(ToricError::CapExceeded(cap));
        }
        let next: Vec<i64> = remaining
            .iter()
            .enumerate()
            .map(|(c, &r)| r - t * degrees[k][c])
            .collect();
        prefix.push(t as u32);
        dfs(g, degrees, d, &next, cap, used + t as u32, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

fn torsion_matches(g: &ClassGroup, degrees: &[Vec<i64>], d: &[i64], u: &[u32]) -> bool {
    g.torsion.iter().enumerate().all(|(j, &m)| {
        let c = g.free_rank + j;
        let s: i64 = u.iter().zip(degrees).map(|(&e, deg)| e as i64 * deg[c]).sum();
        (s - d[c]).rem_euclid(m as i64) == 0
    })
}

fn floor(x: &Q) -> i64 {
    i64::try_from(x.floor().to_integer()).expect("bound fits in i64")
}

fn ceil(x: &Q) -> i64 {
    i64::try_from(x.ceil().to_integer()).expect("bound fits in i64")
}

/// Specs of standard toric varieties with their usual collections.
pub mod examples {
    use super::*;

    fn z(r: usize) -> ClassGroup {
        ClassGroup {
            free_rank: r,
            torsion: vec![],
        }
    }

    /// `P^n` with the bundles `O(b)`.
    pub fn projective(n: usize, bundles: &[i64]) -> ToricCollectionSpec {
        let vars: Vec<(String, Vec<i64>)> = (0..=n).map(|i| (format!("x{i}"), vec![1])).collect();
        let vars: Vec<(&str, Vec<i64>)> = vars.iter().map(|(s, d)| (s.as_str(), d.clone())).collect();
        ToricCollectionSpec::new(z(1), &vars, bundles.iter().map(|&b| vec![b]).collect())
    }

    /// Hirzebruch surface `F_n` with `O, O(1,0), O(0,1), O(1,1)`.
    pub fn hirzebruch(n: i64) -> ToricCollectionSpec {
        ToricCollectionSpec::new(
            z(2),
            &[
                ("x1", vec![1, 0]),
                ("x2", vec![-n, 1]),
                ("x3", vec![1, 0]),
                ("x4", vec![0, 1]),
            ],
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        )
    }

    pub fn p1xp1() -> ToricCollectionSpec {
        ToricCollectionSpec::new(
            z(2),
            &[
                ("x0", vec![1, 0]),
                ("x1", vec![1, 0]),
                ("y0", vec![0, 1]),
                ("y1", vec![0, 1]),
            ],
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        )
    }

    /// Weighted projective plane `P(1,1,2)` with `O, ..., O(3)`.
    pub fn weighted_112() -> ToricCollectionSpec {
        ToricCollectionSpec::new(
            z(1),
            &[("x0", vec![1]), ("x1", vec![1]), ("x2", vec![2])],
            vec![vec![0], vec![1], vec![2], vec![3]],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn pointed_examples() {
        assert!(is_pointed(&hirzebruch(1)).unwrap());
        assert!(is_pointed(&projective(2, &[0])).unwrap());
        let line = ToricCollectionSpec::new(
            ClassGroup {
                free_rank: 1,
                torsion: vec![],
            },
            &[("a", vec![1]), ("b", vec![-1])],
            vec![vec![0]],
        );
        assert!(!is_pointed(&line).unwrap());
        assert_eq!(monomials_of_degree(&line, &[0]), Err(ToricError::NotPointed));
    }

    #[test]
    fn monomials() {
        let p2 = projective(2, &[0, 1, 2]);
        assert_eq!(
            monomials_of_degree(&p2, &[1]).unwrap(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        assert_eq!(monomials_of_degree(&p2, &[0]).unwrap(), vec![vec![0, 0, 0]]);
        assert_eq!(monomials_of_degree(&p2, &[2]).unwrap().len(), 6);
        assert!(monomials_of_degree(&p2, &[-1]).unwrap().is_empty());
        let f2 = hirzebruch(2);
        assert_eq!(
            monomials_of_degree(&f2, &[0, 1]).unwrap(),
            vec![
                vec![0, 0, 0, 1],
                vec![2, 1, 0, 0],
                vec![1, 1, 1, 0],
                vec![0, 1, 2, 0]
            ]
        );
    }

    #[test]
    fn torsion_congruence() {
        // Z ⊕ Z/2 with x of degree (1,1), y of degree (1,0)
        let spec = ToricCollectionSpec::new(
            ClassGroup {
                free_rank: 1,
                torsion: vec![2],
            },
            &[("x", vec![1, 1]), ("y", vec![1, 0])],
            vec![vec![0, 0]],
        );
        let m = monomials_of_degree(&spec, &[2, 1]).unwrap();
        assert_eq!(m, vec![vec![1, 1]]);
        let m = monomials_of_degree(&spec, &[3, 3]).unwrap();
        assert_eq!(m, vec![vec![3, 0], vec![1, 2]]);
    }

    #[test]
    fn cap_is_enforced() {
        let mut p2 = projective(2, &[0]);
        p2.max_total_degree = 3;
        assert_eq!(monomials_of_degree(&p2, &[4]), Err(ToricError::CapExceeded(3)));
        assert_eq!(monomials_of_degree(&p2, &[3]).unwrap().len(), 10);
    }

    #[test]
    fn spec_errors() {
        let mut s = projective(1, &[0, 0]);
        assert!(matches!(s.validate(), Err(ToricError::InvalidSpec(_))));
        s.collection = vec![vec![0, 1]];
        assert!(matches!(s.validate(), Err(ToricError::InvalidSpec(_))));
    }
}
