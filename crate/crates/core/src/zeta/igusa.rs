use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::require_r1;
use crate::error::{Error, Result};
use crate::exactring::{EPoly, MotivicRational, UniPoly};
use crate::resolution::{Mode, ResolutionData};

/// Laurent polynomial in `q` and `X = q^{-s}`: `(q-exp, X-exp) ↦ coefficient`.
type QX = BTreeMap<(i64, i64), BigInt>;

/// Igusa local zeta function as `P(q, q^{-s}) / ∏ (1 - q^{-ν} q^{-Ns})^m`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IgusaZeta {
    #[serde(with = "crate::exactring::pairs")]
    numerator: QX,
    /// `(ν, N) ↦ m` for the factor `(1 - q^{-ν-Ns})^m`.
    #[serde(with = "crate::exactring::pairs")]
    factors: BTreeMap<(i64, i64), u32>,
}

fn add(p: &mut QX, k: (i64, i64), c: BigInt) {
    if c.is_zero() {
        return;
    }
    let vanished = {
        let x = p.entry(k).or_insert_with(BigInt::zero);
        *x += c;
        x.is_zero()
    };
    if vanished {
        p.remove(&k);
    }
}

fn mul(a: &QX, b: &QX) -> QX {
    let mut r = QX::new();
    for ((i, j), c) in a {
        for ((k, l), d) in b {
            add(&mut r, (i + k, j + l), c * d);
        }
    }
    r
}

fn mono(qe: i64, xe: i64, c: i64) -> QX {
    let mut r = QX::new();
    add(&mut r, (qe, xe), BigInt::from(c));
    r
}

fn factor_poly(nu: i64, n: i64) -> QX {
    let mut r = mono(0, 0, 1);
    add(&mut r, (-nu, n), BigInt::from(-1));
    r
}

fn from_count(p: &UniPoly) -> Result<QX> {
    let mut r = QX::new();
    for (e, c) in &p.terms {
        if !e.is_integer() {
            return Err(Error::NonTateClass(format!("count {p} has fractional exponents")));
        }
        add(&mut r, (e.to_integer(), 0), c.clone());
    }
    Ok(r)
}

/// Exact division by `1 - q^{-ν} X^n`, if possible.
fn div_factor(p: &QX, nu: i64, n: i64) -> Option<QX> {
    if p.is_empty() {
        return Some(QX::new());
    }
    // Group by X-degree.
    let mut by_x: BTreeMap<i64, BTreeMap<i64, BigInt>> = BTreeMap::new();
    for ((qe, xe), c) in p {
        by_x.entry(*xe).or_default().insert(*qe, c.clone());
    }
    let lo = *by_x.keys().next().unwrap();
    let hi = *by_x.keys().last().unwrap();
    if hi - lo < n {
        return None;
    }
    // Q_k = P_k + q^{-ν} Q_{k-n}, for k in lo..=hi-n; the rest must cancel.
    let mut q: BTreeMap<i64, BTreeMap<i64, BigInt>> = BTreeMap::new();
    let shifted = |row: Option<&BTreeMap<i64, BigInt>>| -> BTreeMap<i64, BigInt> {
        row.map(|r| r.iter().map(|(e, c)| (e - nu, c.clone())).collect())
            .unwrap_or_default()
    };
    for k in lo..=hi {
        let mut row = by_x.get(&k).cloned().unwrap_or_default();
        for (e, c) in shifted(q.get(&(k - n))) {
            let x = row.entry(e).or_insert_with(BigInt::zero);
            *x += c;
        }
        row.retain(|_, c| !c.is_zero());
        if k <= hi - n {
            q.insert(k, row);
        } else if !row.is_empty() {
            return None;
        }
    }
    let mut r = QX::new();
    for (k, row) in q {
        for (e, c) in row {
            add(&mut r, (e, k), c);
        }
    }
    Some(r)
}

impl IgusaZeta {
    /// Sums `c · ∏ (q-1) q^{-ν} X^N / (1 - q^{-ν} X^N)` over the items and
    /// reduces.
    fn assemble(items: Vec<(QX, Vec<(i64, i64)>)>) -> IgusaZeta {
        let mut common: BTreeMap<(i64, i64), u32> = BTreeMap::new();
        for (_, fs) in &items {
            let mut here: BTreeMap<(i64, i64), u32> = BTreeMap::new();
            for f in fs {
                *here.entry(*f).or_insert(0) += 1;
            }
            for (f, m) in here {
                let e = common.entry(f).or_insert(0);
                *e = (*e).max(m);
            }
        }
        let mut total = QX::new();
        for (c, fs) in items {
            let mut num = c;
            let mut here: BTreeMap<(i64, i64), u32> = BTreeMap::new();
            for (nu, n) in &fs {
                *here.entry((*nu, *n)).or_insert(0) += 1;
                let mut g = mono(1 - nu, *n, 1);
                add(&mut g, (-nu, *n), BigInt::from(-1));
                num = mul(&num, &g);
            }
            for (f, m) in &common {
                for _ in here.get(f).copied().unwrap_or(0)..*m {
                    num = mul(&num, &factor_poly(f.0, f.1));
                }
            }
            for (k, v) in num {
                add(&mut total, k, v);
            }
        }
        IgusaZeta {
            numerator: total,
            factors: common,
        }
        .reduced()
    }

    /// Cancels denominator factors against the numerator, replacing
    /// `1 - q^{-ν}X^N` by a divisor `1 - q^{-νd/N}X^d` whenever the
    /// cofactor divides the numerator.
    fn reduced(mut self) -> IgusaZeta {
        if self.numerator.is_empty() {
            self.factors.clear();
            return self;
        }
        loop {
            let mut changed = false;
            let keys: Vec<(i64, i64)> = self.factors.keys().copied().collect();
            for f in keys {
                while self.factors.get(&f).copied().unwrap_or(0) > 0 {
                    if let Some(q) = div_factor(&self.numerator, f.0, f.1) {
                        self.numerator = q;
                        *self.factors.get_mut(&f).unwrap() -= 1;
                        changed = true;
                        continue;
                    }
                    let (nu, n) = f;
                    let smaller = (1..n)
                        .filter(|d| n % d == 0 && (nu * d) % n == 0)
                        .find_map(|d| {
                            let g = (nu * d / n, d);
                            let lifted = mul(&self.numerator, &factor_poly(g.0, g.1));
                            div_factor(&lifted, nu, n).map(|q| (g, q))
                        });
                    match smaller {
                        Some((g, q)) => {
                            self.numerator = q;
                            *self.factors.get_mut(&f).unwrap() -= 1;
                            *self.factors.entry(g).or_insert(0) += 1;
                            changed = true;
                        }
                        None => break,
                    }
                }
            }
            self.factors.retain(|_, m| *m > 0);
            if !changed {
                return self;
            }
        }
    }

    /// Count realization `L ↦ q` of a motivic zeta function in `T = L^{-s}`.
    pub fn from_motivic(x: &MotivicRational<EPoly>) -> Result<IgusaZeta> {
        let mut items = Vec::new();
        for t in &x.terms {
            let mut c = QX::new();
            for (e, coeff) in &t.numerator {
                for (k, v) in from_count(&coeff.count()?)? {
                    add(&mut c, (k.0, k.1 + e[0]), v);
                }
            }
            // (L^ν T^{-N} - 1)^{-1} = q^{-ν}X^N/(1 - q^{-ν}X^N)
            let mut fs = Vec::new();
            for (f, m) in &t.factors {
                for _ in 0..*m {
                    fs.push((f.nu, f.n[0] as i64));
                }
            }
            items.push((c, fs));
        }
        Ok(Self::assemble_plain(items))
    }

    /// Like `assemble` but with bare factors `q^{-ν}X^N/(1 - q^{-ν}X^N)`.
    fn assemble_plain(items: Vec<(QX, Vec<(i64, i64)>)>) -> IgusaZeta {
        let mut total = IgusaZeta {
            numerator: QX::new(),
            factors: BTreeMap::new(),
        };
        for (c, fs) in items {
            let mut num = c;
            let mut factors = BTreeMap::new();
            for (nu, n) in fs {
                num = mul(&num, &mono(-nu, n, 1));
                *factors.entry((nu, n)).or_insert(0) += 1;
            }
            total = total.plus(&IgusaZeta {
                numerator: num,
                factors,
            });
        }
        total.reduced()
    }

    fn lift(&self, common: &BTreeMap<(i64, i64), u32>) -> QX {
        let mut num = self.numerator.clone();
        for (f, m) in common {
            for _ in self.factors.get(f).copied().unwrap_or(0)..*m {
                num = mul(&num, &factor_poly(f.0, f.1));
            }
        }
        num
    }

    fn common(&self, o: &IgusaZeta) -> BTreeMap<(i64, i64), u32> {
        let mut c = self.factors.clone();
        for (f, m) in &o.factors {
            let e = c.entry(*f).or_insert(0);
            *e = (*e).max(*m);
        }
        c
    }

    pub fn plus(&self, o: &IgusaZeta) -> IgusaZeta {
        let common = self.common(o);
        let mut num = self.lift(&common);
        for (k, v) in o.lift(&common) {
            add(&mut num, k, v);
        }
        IgusaZeta {
            numerator: num,
            factors: common,
        }
    }

    /// Denominator factors as `(ν, N, m)` for `(1 - q^{-ν-Ns})^m`.
    pub fn factors(&self) -> Vec<(i64, i64, u32)> {
        self.factors.iter().map(|((a, b), m)| (*a, *b, *m)).collect()
    }

    /// Value for a numeric `q` as a rational function of `q^{-s}`, in text.
    pub fn at_q(&self, q: &BigInt) -> Result<String> {
        if q.abs() < BigInt::from(2) {
            return Err(Error::Parse(format!("q must be at least 2, got {q}")));
        }
        let qr = BigRational::from_integer(q.clone());
        let pow = |e: i64| {
            if e >= 0 {
                num_traits::pow(qr.clone(), e as usize)
            } else {
                num_traits::pow(qr.recip(), (-e) as usize)
            }
        };
        let mut by_x: BTreeMap<i64, BigRational> = BTreeMap::new();
        for ((qe, xe), c) in &self.numerator {
            *by_x.entry(*xe).or_insert_with(BigRational::zero) +=
                pow(*qe) * BigRational::from_integer(c.clone());
        }
        by_x.retain(|_, c| !c.is_zero());
        let base = q.to_string();
        let mut parts = Vec::new();
        for (k, c) in &by_x {
            let cs = if c.is_integer() { c.to_string() } else { format!("({c})") };
            parts.push(match k {
                0 => cs,
                _ => format!("{cs}*{base}^({})", s_exp(0, *k)),
            });
        }
        let num = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        Ok(wrap(num, parts.len() > 1, self.factor_strings(&base)))
    }

    fn factor_strings(&self, base: &str) -> Vec<String> {
        self.factors
            .iter()
            .map(|((nu, n), m)| {
                let f = format!("(1-{base}^({}))", s_exp(-nu, *n));
                if *m > 1 {
                    format!("{f}^{m}")
                } else {
                    f
                }
            })
            .collect()
    }

    fn numerator_string(&self) -> (String, usize) {
        let mut keys: Vec<&(i64, i64)> = self.numerator.keys().collect();
        keys.sort_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
        let mut s = String::new();
        for (i, k) in keys.iter().enumerate() {
            let c = &self.numerator[k];
            let neg = c.is_negative();
            let a = c.abs();
            let power = q_power(k.0, k.1);
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push(if neg { '-' } else { '+' });
            }
            match (power.is_empty(), a.is_one()) {
                (true, _) => s.push_str(&a.to_string()),
                (false, true) => s.push_str(&power),
                (false, false) => s.push_str(&format!("{a}*{power}")),
            }
        }
        if keys.is_empty() {
            s.push('0');
        }
        (s, keys.len())
    }

    pub fn to_latex(&self) -> String {
        let (num, _) = self.numerator_string();
        let num = num.replace('(', "{").replace(')', "}").replace('*', "");
        if self.factors.is_empty() {
            return num;
        }
        let den: String = self
            .factor_strings("q")
            .iter()
            .map(|f| f.replace("^(", "^{").replace("))", "})"))
            .collect();
        format!("\\frac{{{num}}}{{{den}}}")
    }
}

fn s_exp(j: i64, k: i64) -> String {
    let mut s = String::new();
    if j != 0 {
        s.push_str(&j.to_string());
    }
    match k {
        0 => {
            if j == 0 {
                s.push('0');
            }
        }
        1 => s.push_str("-s"),
        -1 => s.push_str(if j == 0 { "s" } else { "+s" }),
        k if k > 0 => s.push_str(&format!("-{k}s")),
        k => s.push_str(&format!("{}{}s", if j == 0 { "" } else { "+" }, -k)),
    }
    s
}

fn q_power(j: i64, k: i64) -> String {
    match (j, k) {
        (0, 0) => String::new(),
        (1, 0) => "q".into(),
        (j, 0) if j > 1 => format!("q^{j}"),
        _ => format!("q^({})", s_exp(j, k)),
    }
}

fn wrap(num: String, multi: bool, factors: Vec<String>) -> String {
    if factors.is_empty() {
        return num;
    }
    let num = if multi { format!("({num})") } else { num };
    if factors.len() == 1 {
        format!("{num}/{}", factors[0])
    } else {
        format!("{num}/({})", factors.concat())
    }
}

impl PartialEq for IgusaZeta {
    fn eq(&self, o: &Self) -> bool {
        let common = self.common(o);
        self.lift(&common) == o.lift(&common)
    }
}

impl fmt::Display for IgusaZeta {
    /// `(1-q^(-1))/(1-q^(-1-s))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, n) = self.numerator_string();
        write!(f, "{}", wrap(num, n > 1, self.factor_strings("q")))
    }
}

/// Igusa local zeta function `q^{-d} Σ_I #E_I°(F_q) ∏ (q-1)/(q^{ν_i+sN_i} - 1)`
/// from the point counts of all strata.
pub fn igusa_zeta(res: &ResolutionData) -> Result<IgusaZeta> {
    require_r1(res, "the Igusa zeta function")?;
    let views = res.strata_in(Mode::Global)?;
    res.require_zeta_data(&views)?;
    let mut items = Vec::new();
    for v in &views {
        let count = v.stratum.count.as_ref().ok_or_else(|| {
            let ids: Vec<&str> = v.comps.iter().map(|c| c.id.as_str()).collect();
            Error::MissingCounts(format!("stratum {ids:?} has no point count"))
        })?;
        let c = mul(&from_count(count)?, &mono(-(res.dim as i64), 0, 1));
        let fs = v
            .comps
            .iter()
            .map(|c| (c.nu.to_integer(), c.n[0] as i64))
            .collect();
        items.push((c, fs));
    }
    Ok(IgusaZeta::assemble(items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::builtin_fixture;
    use crate::zeta::denef_loeser;

    fn fx(name: &str) -> ResolutionData {
        builtin_fixture(name).unwrap().data
    }

    #[test]
    fn classical_examples() {
        assert_eq!(igusa_zeta(&fx("xN(1)")).unwrap().to_string(), "(1-q^(-1))/(1-q^(-1-s))");
        assert_eq!(igusa_zeta(&fx("xN(2)")).unwrap().to_string(), "(1-q^(-1))/(1-q^(-1-2s))");
    }

    #[test]
    fn cusp_denominator() {
        let z = igusa_zeta(&fx("cuspA")).unwrap();
        assert_eq!(z.factors(), vec![(1, 1, 1), (5, 6, 1)]);
        assert_eq!(z, igusa_zeta(&fx("cuspB")).unwrap());
    }

    #[test]
    fn matches_count_realized_motivic_zeta() {
        for name in ["xN(1)", "xN(3)", "cuspA"] {
            let r = fx(name);
            let dl = IgusaZeta::from_motivic(&denef_loeser(&r, Mode::Global).unwrap()).unwrap();
            assert_eq!(dl, igusa_zeta(&r).unwrap(), "{name}");
        }
    }

    #[test]
    fn missing_counts() {
        assert!(matches!(igusa_zeta(&fx("node")), Err(Error::MissingCounts(_))));
    }

    #[test]
    fn numeric_q() {
        let z = igusa_zeta(&fx("xN(1)")).unwrap();
        assert_eq!(z.at_q(&BigInt::from(2)).unwrap(), "(1/2)/(1-2^(-1-s))");
    }
}
