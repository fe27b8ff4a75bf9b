use std::fs;
use std::path::{Path, PathBuf};

use hardy_core::element::HardyElement;
use hardy_core::fixtures::*;
use hardy_core::hayashi::*;
use hardy_core::linalg::{c, cr, CVec, ONE};
use hardy_core::nearly_inv::{counterexample_ubu, sarason_b, sarason_equivalence, theorem34_residual, verify_lemma31, Agreement, KernelProbe};
use hardy_core::symbol::MatrixSymbol;
use hardy_core::toeplitz::{build_toeplitz, kernel_basis, subspace_angle, SubspaceBasis};
use hardy_core::{HardyError, SampleGrid};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Failure, Identity};

fn read_symbol(path: &Path) -> Result<MatrixSymbol, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    MatrixSymbol::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, body: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, body)?;
    Ok(path)
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

pub fn classify(g: &Path, u: &Path, cfg: &HayashiConfig, out: Option<&Path>) -> Result<(), Failure> {
    let g = read_symbol(g)?;
    let u = read_symbol(u)?;
    let mut rep = classify_kernel(&g, &u, cfg)?;
    if let Some(dir) = out {
        if let Some(phi) = &rep.phi {
            let path = write(dir, "phi.json", &phi.to_json())?;
            rep.symbol_ref = path.display().to_string();
        }
        write(dir, "report.json", &rep.to_json())?;
    }
    println!("{}", rep.to_json());
    if rep.verdict == KernelVerdict::Indeterminate {
        return Err(Failure::Numerical(format!("indeterminate at N = {}", cfg.ladder.last().unwrap())));
    }
    Ok(())
}

#[derive(Serialize)]
struct BasisJson {
    dim: usize,
    degree: usize,
    /// Stacked coefficient vectors as `[re, im]` pairs.
    elements: Vec<Vec<[f64; 2]>>,
}

fn basis_json(b: &SubspaceBasis) -> BasisJson {
    BasisJson {
        dim: b.dim,
        degree: b.degree,
        elements: b.elements.iter().map(|e| e.to_stacked().iter().map(|z| [z.re, z.im]).collect()).collect(),
    }
}

pub fn construct(g0: &Path, u: &Path, cfg: &HayashiConfig, out: Option<&Path>) -> Result<(), Failure> {
    let g0 = read_symbol(g0)?;
    let u = read_symbol(u)?;
    let con = construct_kernel(&g0, &u, cfg)?;
    let mut refs = json!(null);
    if let Some(dir) = out {
        let g = write(dir, "G.json", &con.g.to_json())?;
        let phi = write(dir, "phi.json", &con.phi.to_json())?;
        let f = write(dir, "F.json", &pretty(&basis_json(&con.f)))?;
        refs = json!({"G": g, "phi": phi, "F": f});
    }
    let normalization: Vec<Vec<[f64; 2]>> = con
        .normalization
        .row_iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    let report = json!({
        "special": con.special,
        "rigidity": con.rigidity,
        "normalization": normalization,
        "f_dim": con.f.len(),
        "cross_check": con.checks,
        "files": refs,
    });
    if let Some(dir) = out {
        write(dir, "report.json", &pretty(&report))?;
    }
    println!("{}", pretty(&report));
    let worst = con.checks.iter().map(|c| c.angle).fold(0.0, f64::max);
    if worst > cfg.angle_tol || con.checks.iter().any(|c| c.kernel_dim != c.subspace_dim) {
        return Err(Failure::Numerical(format!("cross-check did not settle (angle {worst:.3e})")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Examples

struct Entry {
    name: &'static str,
    summary: String,
    data: Value,
}

fn span_a_bz(n: usize) -> Result<SubspaceBasis, HardyError> {
    let e0 = HardyElement::constant(CVec::from_vec(vec![ONE, cr(0.0)]));
    let e1 = HardyElement::new(2, vec![CVec::zeros(2), CVec::from_vec(vec![ONE, cr(0.0)])])?;
    SubspaceBasis::orthonormalize(2, n, &[e0, e1], 1e-12)
}

fn example_entries(cfg: &HayashiConfig) -> Result<Vec<Entry>, HardyError> {
    let mut out = Vec::new();
    let grid = cfg.grid()?;

    let phi3 = MatrixSymbol::block_diag(&[MatrixSymbol::scalar(-2, &[ONE]), MatrixSymbol::identity(1)]);
    let kb = kernel_basis(&build_toeplitz(&phi3, 8), cfg.tol.rank_tol);
    let angle = subspace_angle(&kb.basis, &span_a_bz(8)?)?;
    out.push(Entry {
        name: "block-kernel",
        summary: format!("ker T_phi has dim {} and angle {angle:.2e} from {{(a+bz, 0)}}", kb.dim()),
        data: json!({"kernel_dim": kb.dim(), "angle": angle}),
    });

    let rep = classify_kernel(&diagonal_g(), &z_identity(2), cfg)?;
    out.push(Entry {
        name: "diagonal-negative",
        summary: format!("final {:?}, cross-check angle {:.3}", rep.verdict, rep.cross_check_angle.unwrap_or(f64::NAN)),
        data: serde_json::to_value(&rep).expect("serializes"),
    });

    let ubu = counterexample_ubu(&z(), &MatrixSymbol::real_poly(&[0.5]), &MatrixSymbol::zeros(1, 1), &grid, cfg.tol.residual_tol)?;
    out.push(Entry {
        name: "counterexample",
        summary: format!("p_- mass of U*BU is {ubu:.12} for (b1, b2) = (1/2, 0)"),
        data: json!({"p_minus_mass": ubu}),
    });

    let rep = classify_kernel(&g_flagship(cfg.degree()), &z(), cfg)?;
    out.push(Entry {
        name: "flagship",
        summary: format!("final {:?}, cross-check angle {:.2e}", rep.verdict, rep.cross_check_angle.unwrap_or(f64::NAN)),
        data: serde_json::to_value(&rep).expect("serializes"),
    });

    let rep = classify_kernel(&g_one_plus_z(), &z(), cfg)?;
    out.push(Entry {
        name: "one-plus-z",
        summary: format!("final {:?}, mass gap {:.6}", rep.verdict, rep.special.mass_gap),
        data: serde_json::to_value(&rep).expect("serializes"),
    });

    let con = construct_kernel(&recipe_g0(), &recipe_u(&grid)?, cfg)?;
    out.push(Entry {
        name: "matrix-recipe",
        summary: format!("dim F = {}, angle {:.2e} at N = {}", con.f.len(), con.checks[0].angle, con.checks[0].n),
        data: json!({"f_dim": con.f.len(), "cross_check": con.checks}),
    });

    let emb = embed_rect(&column_g(), &z().shift(1), cfg)?;
    let diff = emb.phi.max_coeff_diff(&phi3);
    out.push(Entry {
        name: "rect-embedding",
        summary: format!("phi differs from diag(conj z^2, 1) by {diff:.1e}; final {:?}", emb.classification.verdict),
        data: json!({"phi_diff": diff, "final": emb.classification.verdict}),
    });
    Ok(out)
}

pub fn examples(cfg: &HayashiConfig, as_json: bool, out: Option<&Path>) -> Result<(), Failure> {
    let entries = example_entries(cfg)?;
    let bundle: Value = entries.iter().map(|e| (e.name.to_string(), e.data.clone())).collect::<serde_json::Map<_, _>>().into();
    if let Some(dir) = out {
        write(dir, "examples.json", &pretty(&bundle))?;
    }
    if as_json {
        println!("{}", pretty(&bundle));
    } else {
        for e in &entries {
            println!("{:<18} {}", e.name, e.summary);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Debug, Clone, Serialize)]
struct Row {
    fixture: String,
    #[serde(rename = "N")]
    n: usize,
    residual: f64,
    tolerance: f64,
    pass: bool,
}

fn kernel_probes() -> Vec<KernelProbe> {
    let pts = probe_points();
    let u = |k: usize| CVec::from_element(1, c((k as f64).cos(), (k as f64).sin()));
    let mut out = Vec::new();
    for (i, w) in pts.iter().enumerate() {
        for (j, z) in pts.iter().enumerate() {
            out.push((*w, u(i), *z, u(j)));
        }
    }
    out
}

fn widen(probes: &[KernelProbe], m: usize) -> Vec<KernelProbe> {
    probes
        .iter()
        .map(|(w, u, z, v)| {
            let lift = |x: &CVec| CVec::from_iterator(m, (0..m).map(|i| x[0] * cr(1.0 + i as f64)));
            (*w, lift(u), *z, lift(v))
        })
        .collect()
}

fn scalar_gs(n: usize) -> Vec<(&'static str, MatrixSymbol)> {
    vec![("one-plus-z", g_one_plus_z()), ("flagship", g_flagship(n))]
}

fn rows_for(identity: Identity, cfg: &HayashiConfig) -> Result<Vec<Row>, HardyError> {
    let tol = cfg.tol.residual_tol;
    let mut rows = Vec::new();
    // Fixtures are expanded once at a generous degree so that the rows isolate the effect of N.
    let deep = cfg.degree().max(128);
    let mut push = |fixture: &str, n: usize, residual: f64, tolerance: f64, pass: bool| {
        rows.push(Row { fixture: fixture.to_string(), n, residual, tolerance, pass });
    };
    for &n in &cfg.ladder {
        let grid = SampleGrid::new(cfg.tol.with_degree(n).grid_size)?;
        match identity {
            Identity::Lemma31 => {
                let mut cases = scalar_gs(deep);
                cases.push(("identity", MatrixSymbol::identity(2)));
                for (name, g) in cases {
                    let (_, b) = sarason_b(&g, n, tol)?;
                    let probes = widen(&kernel_probes(), g.cols());
                    let r = verify_lemma31(&g, &b, &probes, n)?;
                    push(name, n, r, tol, r <= tol);
                }
            }
            Identity::Thm34 => {
                for (name, g) in scalar_gs(deep) {
                    let (_, b) = sarason_b(&g, n, tol)?;
                    let r = theorem34_residual(&g, &b, n)?;
                    push(name, n, r, 1e-6, r <= 1e-6);
                }
            }
            Identity::Thm35 => {
                let cases = [
                    ("one-plus-z/z", g_one_plus_z(), z()),
                    ("one-plus-z/z2", g_one_plus_z(), z().shift(1)),
                    ("identity/zI", MatrixSymbol::identity(2), z_identity(2)),
                ];
                for (name, g, u) in cases {
                    let rep = sarason_equivalence(&g, &u, n, &grid, cfg.tol.rank_tol, tol)?;
                    push(name, n, rep.isometry_defect, tol, rep.verdict != Agreement::Indeterminate);
                }
            }
            Identity::PairIdentity => {
                for fx in pair_fixtures(deep) {
                    let r = pair_identity_defect(&fx.b, &fx.a, &grid);
                    push(fx.name, n, r, tol, r <= tol);
                }
                let built = [
                    ("z2-half", MatrixSymbol::scalar(2, &[cr(0.5)])),
                    ("half-diag", MatrixSymbol::constant(recipe_c())),
                ];
                for (name, b) in built {
                    let r = pair_from_b(&b, n, &grid, tol)?.boundary_defect;
                    push(name, n, r, tol, r <= tol);
                }
            }
            Identity::Cor53 => {
                let half = &pair_fixtures(deep)[0];
                let cases = [
                    ("half-shift*z", half.b.clone(), z()),
                    ("half-shift*z2", half.b.clone(), z().shift(1)),
                    ("half-diag*recipe-u", MatrixSymbol::constant(recipe_c()), recipe_u(&grid)?),
                ];
                for (name, b, u) in cases {
                    let r = cor53_gap(&b, &u, n, &grid, tol)?;
                    push(name, n, r, 10.0 * tol, r <= 10.0 * tol);
                }
            }
            Identity::Prop52 => {
                let probes = polynomial_probes(1, 4, 8, 5);
                for fx in pair_fixtures(deep) {
                    let r = prop52_residual(&fx.b, &fx.a, &probes, n)?;
                    push(fx.name, n, r, tol, r <= tol);
                }
            }
        }
    }
    Ok(rows)
}

pub fn verify(identity: Identity, only: &[String], cfg: &HayashiConfig, as_json: bool, out: Option<&Path>) -> Result<(), Failure> {
    let mut rows = rows_for(identity, cfg)?;
    if !only.is_empty() {
        let known: Vec<String> = rows.iter().map(|r| r.fixture.clone()).collect();
        if let Some(bad) = only.iter().find(|f| !known.contains(f)) {
            return Err(Failure::Input(format!("unknown fixture {bad:?} for this identity")));
        }
        rows.retain(|r| only.contains(&r.fixture));
    }
    let body = if as_json {
        pretty(&rows)
    } else {
        let mut s = String::from("fixture,N,residual,tolerance,pass\n");
        for r in &rows {
            s.push_str(&format!("{},{},{:.6e},{:.1e},{}\n", r.fixture, r.n, r.residual, r.tolerance, r.pass));
        }
        s
    };
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, &body)?;
        }
        None => print!("{body}"),
    }
    Ok(())
}
