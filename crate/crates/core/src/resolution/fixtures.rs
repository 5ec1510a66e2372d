//! Built-in resolution data. Every entry is derived by hand from a standard
//! resolution; the derivation is summarized in the fixture note.

use super::{Component, Cover, ResolutionData, Stratum};
use crate::error::{Error, Result};
use crate::exactring::{parse_rational, EPoly};
use crate::grothendieck::EqClass;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub data: ResolutionData,
    pub note: String,
}

struct Builder {
    r: usize,
    dim: u32,
    counts: bool,
    components: Vec<Component>,
    strata: Vec<Stratum>,
}

impl Builder {
    fn new(r: usize, dim: u32) -> Self {
        Builder {
            r,
            dim,
            counts: true,
            components: vec![],
            strata: vec![],
        }
    }

    fn comp(mut self, id: &str, n: &[u32], nu: &str, exceptional: bool) -> Self {
        self.components.push(Component {
            id: id.into(),
            n: n.to_vec(),
            nu: parse_rational(nu).expect("fixture nu"),
            exceptional,
        });
        self
    }

    fn stratum(mut self, ids: &[&str], epoly: &str, over: bool, cover: Option<(u32, EqClass)>) -> Self {
        let epoly = EPoly::parse(epoly).expect("fixture class");
        let count = if self.counts { epoly.count().ok() } else { None };
        self.strata.push(Stratum {
            components: ids.iter().map(|s| s.to_string()).collect(),
            epoly,
            over_locus: over,
            count,
            cover: cover.map(|(degree, chars)| Cover { degree, chars }),
        });
        self
    }

    fn build(self) -> ResolutionData {
        ResolutionData {
            r: self.r,
            dim: self.dim,
            components: self.components,
            strata: self.strata,
        }
    }
}

fn cls(items: &[(&str, &str)]) -> EqClass {
    EqClass::parse_map(items.iter().copied()).expect("fixture class")
}

fn trivial(e: &str) -> EqClass {
    EqClass::trivial(EPoly::parse(e).expect("fixture class"))
}

fn regular_times(n: u32, e: &str) -> EqClass {
    EqClass::regular(n as i64).scale(&EPoly::parse(e).expect("fixture class"))
}

fn x_power(n: u32) -> Fixture {
    let data = Builder::new(1, 1)
        .comp("E", &[n], "1", false)
        .stratum(&[], "L - 1", false, None)
        .stratum(&["E"], "1", true, Some((n, EqClass::regular(n as i64))))
        .build();
    Fixture {
        name: format!("xN({n})"),
        data,
        note: format!(
            "f = x^{n} on the affine line, identity resolution; the fiber over the origin \
             is the μ_{n}-torsor of {n}-th roots of a unit, i.e. the regular representation"
        ),
    }
}

fn node() -> Fixture {
    let mut b = Builder::new(1, 2);
    b.counts = false;
    let data = b
        .comp("E0", &[1], "1", false)
        .comp("E0'", &[1], "1", false)
        .comp("E1", &[2], "2", true)
        .stratum(&[], "(L - 1)^2", false, None)
        .stratum(&["E0"], "L - 1", false, Some((1, trivial("L - 1"))))
        .stratum(&["E0'"], "L - 1", false, Some((1, trivial("L - 1"))))
        .stratum(&["E1"], "L - 1", true, Some((2, trivial("L - 1"))))
        .stratum(&["E0", "E1"], "1", true, Some((1, trivial("1"))))
        .stratum(&["E0'", "E1"], "1", true, Some((1, trivial("1"))))
        .build();
    Fixture {
        name: "node".into(),
        data,
        note: "f = x^2 + y^2, one blow-up of the origin; E1 is met by the two branches, \
               the double cover of E1° given by w^2 = 1 + t^2 is a conic minus its two \
               branch points, with no anti-invariant cohomology; point counts depend on \
               q mod 4 and are omitted"
            .into(),
    }
}

fn cusp_base(extra: bool) -> Builder {
    let e3 = if extra {
        cls(&[
            ("0", "L - 3"),
            ("1/2", "-2"),
            ("1/3", "-2"),
            ("2/3", "-2"),
            ("1/6", "-u - 1"),
            ("5/6", "-v - 1"),
        ])
    } else {
        cls(&[
            ("0", "L - 2"),
            ("1/2", "-1"),
            ("1/3", "-1"),
            ("2/3", "-1"),
            ("1/6", "-u"),
            ("5/6", "-v"),
        ])
    };
    let mut b = Builder::new(1, 2)
        .comp("E0", &[1], "1", false)
        .comp("E1", &[2], "2", true)
        .comp("E2", &[3], "3", true)
        .comp("E3", &[6], "5", true);
    if extra {
        b = b.comp("E4", &[6], "6", true);
    }
    b = b
        .stratum(&[], "L^2 - L", false, None)
        .stratum(&["E0"], "L - 1", false, Some((1, trivial("L - 1"))))
        .stratum(&["E1"], "L", true, Some((2, regular_times(2, "L"))))
        .stratum(&["E2"], "L", true, Some((3, regular_times(3, "L"))))
        .stratum(&["E3"], if extra { "L - 3" } else { "L - 2" }, true, Some((6, e3)))
        .stratum(&["E1", "E3"], "1", true, Some((2, EqClass::regular(2))))
        .stratum(&["E2", "E3"], "1", true, Some((3, EqClass::regular(3))))
        .stratum(&["E0", "E3"], "1", true, Some((1, trivial("1"))));
    if extra {
        b = b
            .stratum(&["E4"], "L", true, Some((6, regular_times(6, "L"))))
            .stratum(&["E3", "E4"], "1", true, Some((6, EqClass::regular(6))));
    }
    b
}

fn cusp_a() -> Fixture {
    Fixture {
        name: "cuspA".into(),
        data: cusp_base(false).build(),
        note: "f = x^2 + y^3, minimal log resolution by three point blow-ups: \
               E1 (N=2, ν=2), E2 (N=3, ν=3), E3 (N=6, ν=5) and the strict transform E0; \
               the μ6-cover of E3° is an elliptic curve with j = 0 minus six points, \
               whose H^1 splits into the primitive characters 1/6 (type u) and 5/6 (type v)"
            .into(),
    }
}

fn cusp_b() -> Fixture {
    Fixture {
        name: "cuspB".into(),
        data: cusp_base(true).build(),
        note: "cuspA followed by the blow-up of a general point of E3: E4 has N = 6, \
               ν = 6; E3° loses a point and its cover loses one free μ6-orbit; the cover \
               of E4° ≅ A^1 is trivial"
            .into(),
    }
}

fn x_plus_y() -> Fixture {
    let data = Builder::new(1, 2)
        .comp("E0", &[1], "1", false)
        .comp("E1", &[1], "2", true)
        .stratum(&[], "L^2 - L", false, None)
        .stratum(&["E0"], "L - 1", false, Some((1, trivial("L - 1"))))
        .stratum(&["E1"], "L", true, Some((1, trivial("L"))))
        .stratum(&["E0", "E1"], "1", true, Some((1, trivial("1"))))
        .build();
    Fixture {
        name: "x_plus_y".into(),
        data,
        note: "f = x + y on the plane with the origin blown up, so that the strata over \
               the origin are separated: E1 is the exceptional line (N=1, ν=2)"
            .into(),
    }
}

fn an_surface(n: u32) -> Result<Fixture> {
    if n == 0 {
        return Err(Error::UnknownFixture("An_surface(0)".into()));
    }
    let mut b = Builder::new(1, 2);
    for i in 1..=n {
        b = b.comp(&format!("E{i}"), &[0], "1", true);
    }
    b = b.stratum(&[], "L^2 - 1", false, None);
    for i in 1..=n {
        let class = if n == 1 {
            "L + 1"
        } else if i == 1 || i == n {
            "L"
        } else {
            "L - 1"
        };
        b = b.stratum(&[&format!("E{i}")], class, true, None);
    }
    for i in 1..n {
        b = b.stratum(&[&format!("E{i}"), &format!("E{}", i + 1)], "1", true, None);
    }
    Ok(Fixture {
        name: format!("An_surface({n})"),
        data: b.build(),
        note: format!(
            "minimal resolution of the A_{n} surface singularity C^2/μ_{}: a chain of {n} \
             (-2)-curves, crepant (ν* = 1); the complement of the chain is \
             (C^2 - 0)/μ_{}, of class L^2 - 1",
            n + 1,
            n + 1
        ),
    })
}

fn a1_blowup() -> Fixture {
    let data = Builder::new(1, 2)
        .comp("E1", &[0], "1", true)
        .comp("E2", &[0], "2", true)
        .stratum(&[], "L^2 - 1", false, None)
        .stratum(&["E1"], "L", true, None)
        .stratum(&["E2"], "L", true, None)
        .stratum(&["E1", "E2"], "1", true, None)
        .build();
    Fixture {
        name: "a1_blowup".into(),
        data,
        note: "An_surface(1) followed by the blow-up of a point of the exceptional curve; \
               the new curve has ν* = 2"
            .into(),
    }
}

fn third_11() -> Fixture {
    let data = Builder::new(1, 2)
        .comp("E1", &[0], "2/3", true)
        .stratum(&[], "L^2 - 1", false, None)
        .stratum(&["E1"], "L + 1", true, None)
        .build();
    Fixture {
        name: "third_11".into(),
        data,
        note: "the cone over the twisted cubic C^2/μ3 with weights (1,1): one \
               (-3)-curve of discrepancy -1/3, so ν* = 2/3"
            .into(),
    }
}

fn xy_pair() -> Fixture {
    let data = Builder::new(2, 2)
        .comp("Ex", &[1, 0], "1", false)
        .comp("Ey", &[0, 1], "1", false)
        .stratum(&[], "(L - 1)^2", false, None)
        .stratum(&["Ex"], "L - 1", true, None)
        .stratum(&["Ey"], "L - 1", true, None)
        .stratum(&["Ex", "Ey"], "1", true, None)
        .build();
    Fixture {
        name: "xy_pair".into(),
        data,
        note: "the pair of functions (x, y) on the plane, identity resolution".into(),
    }
}

/// Names of the shipped fixtures, with representative parameters.
pub fn fixture_names() -> Vec<String> {
    let mut v: Vec<String> = (1..=3).map(|n| format!("xN({n})")).collect();
    v.extend(["node", "cuspA", "cuspB", "x_plus_y", "a1_blowup", "third_11", "xy_pair"].map(String::from));
    v.extend((1..=5).map(|n| format!("An_surface({n})")));
    v
}

fn split_arg(name: &str) -> Result<(&str, Option<u32>)> {
    let unknown = || Error::UnknownFixture(name.to_string());
    match name.split_once('(') {
        None => Ok((name, None)),
        Some((head, rest)) => {
            let arg = rest.strip_suffix(')').ok_or_else(unknown)?;
            let n: u32 = arg.trim().parse().map_err(|_| unknown())?;
            Ok((head, Some(n)))
        }
    }
}

/// Looks up a fixture by name, e.g. `cuspA`, `xN(3)`, `An_surface(2)`.
pub fn builtin_fixture(name: &str) -> Result<Fixture> {
    let unknown = || Error::UnknownFixture(name.to_string());
    let f = match split_arg(name.trim())? {
        ("xN", Some(n)) if n >= 1 => x_power(n),
        ("node", None) => node(),
        ("cuspA", None) => cusp_a(),
        ("cuspB", None) => cusp_b(),
        ("x_plus_y", None) => x_plus_y(),
        ("An_surface", Some(n)) => an_surface(n)?,
        ("a1_blowup", None) => a1_blowup(),
        ("third_11", None) => third_11(),
        ("xy_pair", None) => xy_pair(),
        _ => return Err(unknown()),
    };
    Ok(f)
}
