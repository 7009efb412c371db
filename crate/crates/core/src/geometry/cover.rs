use super::GeometryError;

/// Affine chart `U_i = {X_i ≠ 0}` of ℙⁿ with coordinates `x_a = X_a / X_i`,
/// `a ≠ i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub index: usize,
    pub n: usize,
}

impl Chart {
    /// Indices `a ≠ i` of the homogeneous variables used as coordinates.
    pub fn coordinate_indices(&self) -> Vec<usize> {
        (0..=self.n).filter(|&a| a != self.index).collect()
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        self.coordinate_indices().iter().map(|a| format!("x{a}")).collect()
    }

    /// Chart-`i` exponents of a degree-0 Laurent monomial `X^w` (`Σw = 0`).
    pub fn exponents_of(&self, weight: &[i32]) -> Vec<i32> {
        self.coordinate_indices().iter().map(|&a| weight[a]).collect()
    }

    /// Inverse of [`Chart::exponents_of`].
    pub fn weight_of(&self, exps: &[i32]) -> Vec<i32> {
        let mut w = vec![0; self.n + 1];
        for (e, a) in exps.iter().zip(self.coordinate_indices()) {
            w[a] = *e;
        }
        w[self.index] = -exps.iter().sum::<i32>();
        w
    }

    /// The coordinates of chart `other` as Laurent monomials in this
    /// chart's coordinates: `X_b/X_j = x_b / x_j` with `x_i = 1`.
    pub fn transition(&self, other: &Chart) -> Vec<Vec<i32>> {
        other
            .coordinate_indices()
            .iter()
            .map(|&b| {
                let mut w = vec![0; self.n + 1];
                w[b] += 1;
                w[other.index] -= 1;
                self.exponents_of(&w)
            })
            .collect()
    }
}

/// Substitutes monomials: `exps` is a monomial in coordinates `y`, and
/// `subst[a]` expresses `y_a` as a monomial in coordinates `x`.
pub fn substitute(exps: &[i32], subst: &[Vec<i32>]) -> Vec<i32> {
    let mut out = vec![0; subst.first().map_or(0, |s| s.len())];
    for (e, s) in exps.iter().zip(subst) {
        for (o, x) in out.iter_mut().zip(s) {
            *o += e * x;
        }
    }
    out
}

/// The standard cover of ℙⁿ.
#[derive(Clone, Debug)]
pub struct Cover {
    pub n: usize,
    pub charts: Vec<Chart>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    /// Strictly increasing multi-indices of length `level + 1`, in
    /// lexicographic order.
    pub fn multi_indices(&self, level: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, len: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, len, n, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, level + 1, self.len(), &mut Vec::new(), &mut out);
        out
    }

    pub fn num_levels(&self) -> usize {
        self.len()
    }

    pub fn check_multi_index(&self, set: &[usize]) -> Result<(), GeometryError> {
        if set.is_empty() || set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&i| i >= self.len()) {
            return Err(GeometryError::MultiIndex(set.to_vec()));
        }
        Ok(())
    }

    /// Transitions compose on every triple of charts.
    pub fn check_transitions(&self) -> Result<(), GeometryError> {
        for a in &self.charts {
            for b in &self.charts {
                for c in &self.charts {
                    // c's coordinates via b, then b's via a.
                    let c_in_b = b.transition(c);
                    let b_in_a = a.transition(b);
                    let composed: Vec<Vec<i32>> = c_in_b.iter().map(|m| substitute(m, &b_in_a)).collect();
                    if composed != a.transition(c) {
                        return Err(GeometryError::Cocycle(vec![a.index, b.index, c.index]));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn standard_cover(n: usize) -> Result<Cover, GeometryError> {
    if !(1..=2).contains(&n) {
        return Err(GeometryError::UnsupportedDimension(n));
    }
    let cover = Cover { n, charts: (0..=n).map(|index| Chart { index, n }).collect() };
    cover.check_transitions()?;
    Ok(cover)
}
