use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use aqslie::acm::{
    classify_structure, classify_triple, curvature, validate_acm, xi_killing_check, AcmStructure,
    StructureTag,
};
use aqslie::classifier::{classify_nilpotent, reeb_uniqueness_check};
use aqslie::constructors::{central_extension, weighted_heisenberg_2n1, weighted_heisenberg_4n1, Cocycle};
use aqslie::exterior::{ce_betti_all, ce_d, rank_of_eta};
use aqslie::invariant_forms::{
    anti_invariant_rank, centralizer_of_torus, extension_is_derivation, form_from_moment,
    invariant_closed_2forms, moment_element, planar_complex_structures, reductive_split,
    type_11_check, verify_complex_structure,
};
use aqslie::io::{AlgebraDoc, FormDoc, MatrixDoc};
use aqslie::lie::Subspace;
use aqslie::linalg::{unit_vec, Matrix};
use aqslie::scalar::Scalar;
use aqslie::Error;
use serde_json::{json, Value};

use crate::random;

/// What a successful command produces.
pub struct Payload {
    pub json: Value,
    pub human: String,
    /// A document for stdout in place of the human summary.
    pub document: Option<String>,
}

fn strings<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn matrix_strings<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| strings(&m.row(i))).collect()
}

fn tag_list(tags: &[StructureTag]) -> String {
    tags.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

/// Parse a comma-separated list of 1-based indices.
pub fn parse_indices(list: &str, dim: usize) -> Result<Vec<usize>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let i: usize = s.trim().parse().with_context(|| format!("bad index {s:?}"))?;
            if i == 0 || i > dim {
                return Err(Error::IndexOutOfRange { index: i, dim }.into());
            }
            Ok(i - 1)
        })
        .collect()
}

pub fn check<S: Scalar>(doc: &AlgebraDoc, random_forms: usize, seed: u64) -> Result<Payload> {
    let l = doc.algebra::<S>()?;
    let killing = l.killing_form();
    let series = l.lower_central_series();
    let center = l.center();
    let mut human = String::new();
    writeln!(human, "dimension: {}", l.dim())?;
    writeln!(human, "jacobi: ok")?;
    writeln!(human, "killing form: {:?}", killing.definiteness)?;
    match series.step {
        Some(step) => writeln!(human, "nilpotent: true (step {step})")?,
        None => writeln!(human, "nilpotent: false")?,
    }
    writeln!(human, "center rank: {}", center.rank())?;
    let mut json = json!({
        "dim": l.dim(),
        "jacobi": true,
        "killing": {
            "definiteness": format!("{:?}", killing.definiteness),
            "matrix": matrix_strings(&killing.matrix),
        },
        "nilpotent": series.nilpotent,
        "step": series.step,
        "center_rank": center.rank(),
    });

    if doc.has_structure() {
        let s = doc.structure::<S>()?;
        let report = validate_acm(&s);
        if !report.passed() {
            let detail = match report.max_residual() {
                Some(r) => format!("{} fails at ({}, {})", r.identity, r.slot.0 + 1, r.slot.1 + 1),
                None => "metric is not positive definite".into(),
            };
            return Err(Error::InvalidStructure(detail).into());
        }
        let rank = rank_of_eta(s.algebra(), &s.eta_form())?;
        let killing_xi = xi_killing_check(&s)?;
        let reeb = reeb_uniqueness_check(&s);
        writeln!(human, "structure: valid almost contact metric")?;
        writeln!(human, "rank of eta: {}{}", rank.rank, if rank.maximal { " (maximal)" } else { "" })?;
        writeln!(human, "xi Killing: {killing_xi}")?;
        writeln!(human, "Reeb uniqueness: {reeb}")?;
        json["structure"] = json!({
            "valid": true,
            "rank": rank.rank,
            "maximal_rank": rank.maximal,
            "xi_killing": killing_xi,
            "reeb_unique": reeb,
        });
    }

    if random_forms > 0 {
        let mut rng = random::rng(seed);
        let n = l.dim();
        for t in 0..random_forms {
            let degree = 1 + t % n.saturating_sub(1).max(1);
            let omega = random::random_form::<S>(&mut rng, n, degree.min(n));
            if !ce_d(&l, &ce_d(&l, &omega)?)?.is_zero() {
                return Err(Error::Internal(format!("d(d omega) != 0 for omega = {omega}")).into());
            }
        }
        writeln!(human, "d∘d = 0 on {random_forms} random forms (seed {seed})")?;
        json["random_forms"] = json!({ "count": random_forms, "seed": seed, "dd_zero": true });
    }
    Ok(Payload { json, human, document: None })
}

/// Entry-wise comparison of a pushed-forward structure with the normal form.
fn matches_target<S: Scalar>(pushed: &AcmStructure<S>, target: &AcmStructure<S>) -> bool {
    let n = target.dim();
    let brackets = (0..n).all(|i| {
        (i + 1..n).all(|j| pushed.algebra().basis_bracket(i, j) == target.algebra().basis_bracket(i, j))
    });
    brackets
        && pushed.phi() == target.phi()
        && pushed.xi() == target.xi()
        && pushed.eta() == target.eta()
        && pushed.metric() == target.metric()
}

pub fn classify<S: Scalar>(doc: &AlgebraDoc, conjugations: usize, seed: u64) -> Result<Payload> {
    let s = doc.structure::<S>()?;
    let report = validate_acm(&s);
    if !report.passed() {
        let detail = match report.max_residual() {
            Some(r) => format!("{} fails at ({}, {})", r.identity, r.slot.0 + 1, r.slot.1 + 1),
            None => "metric is not positive definite".into(),
        };
        return Err(Error::InvalidStructure(detail).into());
    }
    let class = classify_structure(&s)?;
    let mut human = String::new();
    writeln!(human, "phi: {}", tag_list(&class.tags))?;
    let mut tags = json!({ "phi": class.tags });

    let companions = doc.companions::<S>()?;
    let companion_structures: Vec<AcmStructure<S>> = companions
        .iter()
        .map(|m| s.with_phi(m.clone()))
        .collect::<aqslie::Result<_>>()?;
    for (idx, c) in companion_structures.iter().enumerate() {
        let cl = classify_structure(c)?;
        writeln!(human, "phi{}: {}", idx + 2, tag_list(&cl.tags))?;
        tags[format!("phi{}", idx + 2)] = json!(cl.tags);
    }
    let mut triple = Vec::new();
    if let [s2, s3] = companion_structures.as_slice() {
        if classify_triple(&s, s2, s3)?.double_aqs_sasakian() {
            triple.push(StructureTag::DoubleAqsSasakian);
        }
        writeln!(
            human,
            "triple: {}",
            if triple.is_empty() { "-".to_string() } else { tag_list(&triple) }
        )?;
    }

    let rank = rank_of_eta(s.algebra(), &s.eta_form())?;
    let iso = classify_nilpotent(&s, &class)?;
    let family = serde_json::to_value(iso.family)?;
    writeln!(human, "rank of eta: {}", rank.rank)?;
    writeln!(human, "normal form: h^{{{}}}, weights ({})", family.as_str().unwrap_or("?"), strings(&iso.weights).join(", "))?;
    if iso.orientation.iter().any(|&o| o < 0) {
        writeln!(human, "orientation: {:?}", iso.orientation)?;
    }
    writeln!(human, "F:")?;
    for row in matrix_strings(&iso.f) {
        writeln!(human, "  [{}]", row.join(", "))?;
    }
    let mut json = json!({
        "dim": s.dim(),
        "tags": tags,
        "triple": if companion_structures.len() == 2 { json!(triple) } else { Value::Null },
        "rank": rank.rank,
        "maximal_rank": rank.maximal,
        "normal_form": {
            "family": family,
            "weights": strings(&iso.weights),
            "orientation": iso.orientation,
            "f": matrix_strings(&iso.f),
            "verified": true,
        },
    });

    if conjugations > 0 {
        let mut rng = random::rng(seed);
        let mut recovered = 0;
        let mut matched = 0;
        for _ in 0..conjugations {
            let q = random::random_orthogonal::<S>(&mut rng, s.dim());
            let conj = s.change_basis(&q)?;
            let other = classify_nilpotent(&conj, &classify_structure(&conj)?)?;
            if other.weights == iso.weights {
                recovered += 1;
            }
            if matches_target(&other.push_forward(&conj)?, &other.target) {
                matched += 1;
            }
        }
        writeln!(
            human,
            "conjugations: {conjugations} (seed {seed}), weights recovered {recovered}, push-forward matches {matched}"
        )?;
        json["conjugations"] = json!({
            "count": conjugations,
            "seed": seed,
            "weights_recovered": recovered,
            "pushforward_matches": matched,
        });
        if recovered != conjugations || matched != conjugations {
            bail!(Error::Internal(format!(
                "conjugation round trip failed: {recovered}/{conjugations} weights, {matched}/{conjugations} tensors"
            )));
        }
    }
    Ok(Payload { json, human, document: None })
}

pub fn cohomology<S: Scalar>(doc: &AlgebraDoc) -> Result<Payload> {
    let l = doc.algebra::<S>()?;
    let betti = ce_betti_all(&l);
    let euler: i64 = betti
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    let symmetric = betti.iter().eq(betti.iter().rev());
    let human = format!(
        "betti: {:?}\neuler characteristic: {euler}\npoincare symmetric: {symmetric}\n",
        betti
    );
    let json = json!({
        "dim": l.dim(),
        "nilpotent": l.is_nilpotent(),
        "betti": betti,
        "euler_characteristic": euler,
        "poincare_symmetric": symmetric,
    });
    Ok(Payload { json, human, document: None })
}

pub fn curvature_cmd<S: Scalar>(doc: &AlgebraDoc) -> Result<Payload> {
    let s = doc.structure::<S>()?;
    let c = curvature(&s)?;
    let scalar = c.scalar();
    let names = s.algebra().basis_names();
    let label = |v: &[S]| -> String {
        let support: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        match support.as_slice() {
            [i] if v[*i] == S::one() => names[*i].clone(),
            _ => format!("({})", strings(v).join(", ")),
        }
    };
    let mut human = format!("scalar curvature: {scalar}\n");
    let mut sectional = Vec::new();
    for v in s.horizontal() {
        let k = c.sectional(s.xi(), &v)?;
        writeln!(human, "K(xi, {}) = {k}", label(&v))?;
        sectional.push(json!({ "vector": label(&v), "value": k.to_string() }));
    }
    let json = json!({
        "dim": s.dim(),
        "scalar": scalar.to_string(),
        "ricci": matrix_strings(&c.ricci()),
        "sectional_xi": sectional,
    });
    Ok(Payload { json, human, document: None })
}

pub fn construct_heisenberg<S: Scalar>(family: &str, weights: &str) -> Result<Payload> {
    let weights: Vec<S> = weights
        .split(',')
        .map(|w| S::parse(w).map_err(Error::from))
        .collect::<std::result::Result<_, _>>()?;
    let doc = match family {
        "4n1" => {
            let h = weighted_heisenberg_4n1(&weights)?;
            AlgebraDoc::from_structure(h.phi(1))
                .with_companions(&[h.phi(2).phi().clone(), h.phi(3).phi().clone()])
        }
        "2n1" => AlgebraDoc::from_structure(&weighted_heisenberg_2n1(&weights)?),
        other => bail!("unknown family {other:?}, expected 4n1 or 2n1"),
    };
    let text = aqslie::io::to_text(&doc);
    let json = json!({ "family": family, "weights": strings(&weights), "document": serde_json::to_value(&doc)? });
    Ok(Payload { json, human: String::new(), document: Some(text) })
}

pub fn extend<S: Scalar>(kahler: &AlgebraDoc, cocycle: &FormDoc) -> Result<Payload> {
    let h = kahler.kahler::<S>()?;
    let cocycle = Cocycle::new(&h, cocycle.form::<S>()?)?;
    let s = central_extension(&h, &cocycle)?;
    let tags = classify_structure(&s)?.tags;
    let doc = AlgebraDoc::from_structure(&s);
    let text = aqslie::io::to_text(&doc);
    let json = json!({
        "invariance": cocycle.invariance(),
        "tags": tags,
        "document": serde_json::to_value(&doc)?,
    });
    let human = format!(
        "cocycle: {}\ntags: {}\n",
        serde_json::to_value(cocycle.invariance())?.as_str().unwrap_or("?"),
        tag_list(&tags)
    );
    Ok(Payload { json, human, document: Some(text) })
}

pub struct InvariantFormsArgs<'a> {
    pub torus: &'a str,
    pub k: Option<&'a str>,
    pub j: Option<&'a MatrixDoc>,
    pub strict: bool,
}

pub fn invariant_forms<S: Scalar>(doc: &AlgebraDoc, args: &InvariantFormsArgs) -> Result<Payload> {
    let g = doc.algebra::<S>()?;
    let n = g.dim();
    let span = |idx: Vec<usize>| Subspace::span(n, idx.into_iter().map(|i| unit_vec::<S>(n, i)));
    let torus = span(parse_indices(args.torus, n)?);
    let mut k = centralizer_of_torus(&g, &torus)?;
    if let Some(list) = args.k {
        k = span(parse_indices(list, n)?);
    }
    let r = reductive_split(&g, &k)?;
    let mut warnings = Vec::new();
    let centralizer = r.is_torus_centralizer();
    if !centralizer {
        if args.strict {
            bail!(Error::InvalidStructure("k is not the centralizer of a torus".into()));
        }
        warnings.push("k is not the centralizer of a torus".to_string());
    }

    let forms = invariant_closed_2forms(&r);
    let mut moments = Vec::new();
    let mut round_trip = true;
    let mut derivations = true;
    for f in &forms {
        let z = moment_element(&r, f)?;
        round_trip &= form_from_moment(&r, &z) == *f;
        derivations &= extension_is_derivation(&r, f)?;
        moments.push(z);
    }
    let injective = Subspace::span(n, moments.clone()).rank() == forms.len();

    let mut human = String::new();
    writeln!(human, "dim g = {n}, dim k = {}, dim m = {}, dim z(k) = {}", k.rank(), r.m_dim(), r.center_of_k().rank())?;
    for w in &warnings {
        writeln!(human, "warning: {w}")?;
    }
    writeln!(human, "closed invariant 2-forms on m: {}", forms.len())?;
    for (f, z) in forms.iter().zip(&moments) {
        writeln!(human, "  {f}  ->  Z = ({})", strings(z).join(", "))?;
    }
    writeln!(human, "moment round trip: {round_trip}, injective: {injective}, extensions are derivations: {derivations}")?;

    let candidates: Vec<(&str, Matrix<S>)> = match args.j {
        Some(d) => {
            let j = d.matrix::<S>()?;
            verify_complex_structure(&r, &j)?;
            vec![("file", j)]
        }
        None if r.m_dim() == 2 => planar_complex_structures(&r)?
            .into_iter()
            .map(|j| ("planar", j))
            .collect(),
        None => Vec::new(),
    };
    let mut structures = Vec::new();
    for (source, j) in &candidates {
        let mut type_11 = Vec::new();
        let mut no_20 = true;
        for f in &forms {
            let rep = type_11_check(&r, f, j)?;
            type_11.push(rep.preserved);
            no_20 &= rep.no_20_part;
        }
        let anti_rank = anti_invariant_rank(&r, &forms, j)?;
        writeln!(
            human,
            "J ({source}): verified, type (1,1): {}, anti-invariant rank: {anti_rank}",
            type_11.iter().all(|&b| b)
        )?;
        structures.push(json!({
            "source": source,
            "matrix": matrix_strings(j),
            "verified": true,
            "type_11": type_11,
            "no_20_part": no_20,
            "anti_invariant_rank": anti_rank,
        }));
    }

    let json = json!({
        "dims": { "g": n, "k": k.rank(), "m": r.m_dim(), "center_k": r.center_of_k().rank() },
        "torus_centralizer": centralizer,
        "warnings": warnings,
        "m_basis": r.m().basis().iter().map(|v| strings(v)).collect::<Vec<_>>(),
        "solution_dimension": forms.len(),
        "forms": forms.iter().map(FormDoc::from_form).collect::<Vec<_>>(),
        "moments": moments.iter().map(|z| strings(z)).collect::<Vec<_>>(),
        "moment_round_trip": round_trip,
        "moment_map_injective": injective,
        "extension_derivations": derivations,
        "complex_structures": structures,
    });
    Ok(Payload { json, human, document: None })
}
