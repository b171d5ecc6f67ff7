use std::fmt::Write as _;

use serde::Serialize;

use crate::gf::Gf81;
use crate::IntMatrix;

use super::{
    anticanonical, automorphism_group, bitangents, count_points, eckardt_points, exceptional_curves,
    frobenius_matrix, gram_matrix, h1_galois, intersection_matrix, picard_basis, reference_frobenius_matrix,
    surface_points, AutomorphismGroup, GeometryError, PointCount,
};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BitangentEntry {
    pub label: String,
    pub a: Option<String>,
    pub b: Option<String>,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometryReport {
    pub bitangents: Vec<BitangentEntry>,
    pub exceptional: usize,
    pub eckardt_counts: Vec<usize>,
    pub basis: Vec<String>,
    pub d8_triple: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub anticanonical: Vec<i64>,
    pub k_squared: i64,
    pub frobenius: Vec<Vec<i64>>,
    pub frobenius_det: i64,
    pub frobenius_order: usize,
    pub trace: i64,
    pub charpoly: Vec<i64>,
    pub points: Vec<PointCount>,
    pub rational_points: Vec<String>,
    pub h1: Vec<i64>,
    pub automorphisms: AutomorphismGroup,
    pub checks: Vec<Check>,
}

fn rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

fn point_text(p: &[Gf81; 4]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(":"))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Computes every invariant and the pass/fail list.
pub fn run_geometry() -> Result<GeometryReport, GeometryError> {
    let lines = bitangents();
    let curves = exceptional_curves();
    let inter = intersection_matrix(&curves);
    let basis = picard_basis(&curves)?;
    let gram = gram_matrix(&curves, &basis);
    let mut form = IntMatrix::identity(8);
    for i in 0..7 {
        form[(i, i)] = -1;
    }
    let k = anticanonical();
    let pair = |u: &[i64], v: &[i64]| -> Result<i64, GeometryError> {
        Ok(form.mul_vec(v)?.iter().zip(u).map(|(a, b)| a * b).sum())
    };
    let classes: Vec<Vec<i64>> = (0..curves.len()).map(|c| super::picard::class_of_with(&inter, &basis, c)).collect();
    let k_squared = pair(&k, &k)?;
    let mut k_degree_one = true;
    let mut classes_consistent = true;
    for (i, ci) in classes.iter().enumerate() {
        k_degree_one &= pair(&k, ci)? == 1;
        for (j, cj) in classes.iter().enumerate() {
            classes_consistent &= pair(ci, cj)? == inter[i][j];
        }
    }

    let m = frobenius_matrix(&curves, &basis)?;
    let det = m.determinant()?;
    let order = m.order(64)?;
    let trace = m.trace()?;
    let charpoly = m.characteristic_polynomial()?;
    let reference = reference_frobenius_matrix().characteristic_polynomial()?;
    let isometry = m.transpose().mul(&form)?.mul(&m)? == form;
    let fixes_k = m.mul_vec(&k)? == k;

    let points = [1, 2, 4].into_iter().map(|deg| count_points(deg, &m)).collect::<Result<Vec<_>, _>>()?;
    let mut rational = surface_points(1)?;
    rational.sort();
    let h1 = h1_galois(&m)?;
    let aut = automorphism_group();
    let eckardt: Vec<usize> = eckardt_points(&curves).into_iter().map(|(_, c)| c.len()).collect();
    let g81 = |v: i64| Gf81::from_ints([v, 0, 0, 0]);
    let expected_rational: Vec<[Gf81; 4]> = [[0, 0, 1, 0], [0, 1, 0, 0], [0, 1, 1, 0], [0, 1, 2, 0]]
        .iter()
        .map(|p| p.map(g81))
        .collect();

    let checks = vec![
        Check { name: "bitangent_count", pass: lines.len() == 28 },
        Check { name: "tangency", pass: lines.iter().all(|l| l.tangency_certified()) },
        Check { name: "exceptional_count", pass: curves.len() == 56 },
        Check { name: "curves_on_surface", pass: curves.iter().all(|c| c.lies_on_surface()) },
        Check { name: "eckardt_points", pass: eckardt == [4, 4] },
        Check { name: "gram_diagonal", pass: gram == form },
        Check { name: "anticanonical_square", pass: k_squared == 2 },
        Check { name: "anticanonical_degree", pass: k_degree_one },
        Check { name: "classes_consistent", pass: classes_consistent },
        Check { name: "frobenius_unimodular", pass: det.abs() == 1 },
        Check { name: "frobenius_order_4", pass: order == 4 },
        Check { name: "frobenius_isometry", pass: isometry },
        Check { name: "frobenius_fixes_k", pass: fixes_k },
        Check { name: "frobenius_trace", pass: trace == -2 },
        Check { name: "frobenius_charpoly", pass: charpoly == reference },
        Check { name: "points_weil", pass: points.iter().all(|p| p.enumerated as i64 == p.weil) },
        Check { name: "rational_points", pass: rational == expected_rational },
        Check { name: "h1", pass: h1 == [4, 4] },
        Check { name: "aut_order", pass: aut.surface_order == 48 && aut.projective_order == 24 },
        Check { name: "aut_block_structure", pass: aut.block_structure && aut.det_one == 24 && aut.sl23_orders },
        Check { name: "aut_involution", pass: aut.involution_commutes && aut.contains_yz_swap },
    ];

    Ok(GeometryReport {
        bitangents: lines
            .iter()
            .map(|l| BitangentEntry {
                label: l.kind.to_string(),
                a: l.a.map(|a| a.to_string()),
                b: l.b.map(|b| b.to_string()),
                certified: l.tangency_certified(),
            })
            .collect(),
        exceptional: curves.len(),
        eckardt_counts: eckardt,
        basis: basis.disjoint.iter().map(|&i| curves[i].to_string()).collect(),
        d8_triple: basis.triple.iter().map(|&i| curves[i].to_string()).collect(),
        gram: rows(&gram),
        anticanonical: k,
        k_squared,
        frobenius: rows(&m),
        frobenius_det: det,
        frobenius_order: order,
        trace,
        charpoly,
        points,
        rational_points: rational.iter().map(point_text).collect(),
        h1,
        automorphisms: aut,
        checks,
    })
}

impl GeometryReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Plain-text sections followed by `key=value` summary lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        let _ = writeln!(w, "## bitangents");
        for b in &self.bitangents {
            match (&b.a, &b.b) {
                (Some(a), Some(bv)) => {
                    let _ = writeln!(w, "x=a*z+b*y [{}] a={a} b={bv} certified={}", b.label, b.certified);
                }
                _ => {
                    let _ = writeln!(w, "{} certified={}", b.label, b.certified);
                }
            }
        }
        let _ = writeln!(w, "## picard basis");
        for (i, c) in self.basis.iter().enumerate() {
            let _ = writeln!(w, "d{} = {c}", i + 1);
        }
        let _ = writeln!(w, "d8 = {}", self.d8_triple.join(" + "));
        let _ = writeln!(w, "## gram matrix");
        for r in &self.gram {
            let _ = writeln!(w, "{}", join(r));
        }
        let _ = writeln!(w, "## frobenius matrix");
        for r in &self.frobenius {
            let _ = writeln!(w, "{}", join(r));
        }
        let _ = writeln!(w, "## rational points");
        for p in &self.rational_points {
            let _ = writeln!(w, "{p}");
        }
        let _ = writeln!(w, "## summary");
        let _ = writeln!(w, "bitangents={}", self.bitangents.len());
        let _ = writeln!(w, "exceptional={}", self.exceptional);
        let _ = writeln!(w, "eckardt={}", join(&self.eckardt_counts));
        let _ = writeln!(w, "anticanonical={}", join(&self.anticanonical));
        let _ = writeln!(w, "k_squared={}", self.k_squared);
        let _ = writeln!(w, "det={}", self.frobenius_det);
        let _ = writeln!(w, "order={}", self.frobenius_order);
        let _ = writeln!(w, "trace={}", self.trace);
        let _ = writeln!(w, "charpoly={}", join(&self.charpoly));
        for p in &self.points {
            let _ = writeln!(w, "points_F{}={}", p.q, p.enumerated);
            let _ = writeln!(w, "weil_F{}={}", p.q, p.weil);
        }
        let _ = writeln!(w, "h1={}", join(&self.h1));
        let a = &self.automorphisms;
        let _ = writeln!(w, "aut_projective={}", a.projective_order);
        let _ = writeln!(w, "aut_det_one={}", a.det_one);
        let _ = writeln!(w, "aut_order={}", a.surface_order);
        let _ = writeln!(w, "## checks");
        for c in &self.checks {
            let _ = writeln!(w, "{}={}", c.name, if c.pass { "pass" } else { "FAIL" });
        }
        let _ = writeln!(w, "all={}", if self.all_passed() { "pass" } else { "FAIL" });
        s
    }
}
