//! Regenerates the example files under `data/`.
//!
//! ```text
//! cargo run -p aqslie --example generate_data -- data
//! ```

use std::fs;
use std::path::Path;

use aqslie::constructors::{
    su2, su2_plus_r2_structure, su3, weighted_heisenberg_2n1, weighted_heisenberg_4n1,
    KahlerLieAlgebra,
};
use aqslie::exterior::KForm;
use aqslie::invariant_forms::{centralizer_of_torus, reductive_split, verify_complex_structure};
use aqslie::io::{to_text, AlgebraDoc, FormDoc, MatrixDoc};
use aqslie::lie::{LieAlgebra, Subspace};
use aqslie::linalg::{unit_vec, Matrix};
use aqslie::scalar::{Exact, Float, Scalar};

fn write(dir: &Path, name: &str, text: String) {
    let path = dir.join(name);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(&path, text).unwrap();
    println!("wrote {}", path.display());
}

fn heisenberg_4n1<S: Scalar>(weights: &[i64]) -> AlgebraDoc {
    let w: Vec<S> = weights.iter().map(|&x| S::from_int(x)).collect();
    let h = weighted_heisenberg_4n1(&w).unwrap();
    AlgebraDoc::from_structure(h.phi(1))
        .with_companions(&[h.phi(2).phi().clone(), h.phi(3).phi().clone()])
}

fn heisenberg_2n1(weights: &[i64]) -> AlgebraDoc {
    let w: Vec<Exact> = weights.iter().map(|&x| Exact::from_int(x)).collect();
    AlgebraDoc::from_structure(&weighted_heisenberg_2n1(&w).unwrap())
}

/// `J x_jk = y_jk`, `J y_jk = −x_jk` on the three root planes of `su(3)`.
fn su3_flag_j() -> Matrix<Exact> {
    let g = su3::<Exact>();
    let torus = Subspace::span(8, [unit_vec(8, 0), unit_vec(8, 1)]);
    let k = centralizer_of_torus(&g, &torus).unwrap();
    let r = reductive_split(&g, &k).unwrap();
    let expected: Vec<Vec<Exact>> = (2..8).map(|i| unit_vec(8, i)).collect();
    assert_eq!(r.m().basis(), expected.as_slice(), "m is spanned by x12, ..., y23");
    let mut j = Matrix::zeros(6, 6);
    for plane in 0..3 {
        j[(2 * plane + 1, 2 * plane)] = Exact::one();
        j[(2 * plane, 2 * plane + 1)] = -Exact::one();
    }
    verify_complex_structure(&r, &j).unwrap();
    j
}

fn jacobi_violator() -> LieAlgebra<Exact> {
    LieAlgebra::from_entries(
        3,
        [(0, 1, 2, Exact::one()), (0, 2, 0, Exact::one())],
    )
    .unwrap()
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "data".into());
    let dir = Path::new(&dir);
    let alg = |name: &str| format!("algebras/{name}.json");

    for weights in [&[1][..], &[3], &[1, 1], &[1, 2], &[1, 2, 3], &[1, 0]] {
        let tag: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
        write(dir, &alg(&format!("heisenberg_4n1_{}", tag.join("_"))), to_text(&heisenberg_4n1::<Exact>(weights)));
    }
    write(dir, &alg("heisenberg_4n1_1_float"), to_text(&heisenberg_4n1::<Float>(&[1])));
    write(dir, &alg("heisenberg_2n1_1"), to_text(&heisenberg_2n1(&[1])));
    write(dir, &alg("heisenberg_2n1_1_3"), to_text(&heisenberg_2n1(&[1, 3])));
    write(dir, &alg("su2"), to_text(&AlgebraDoc::from_algebra(&su2::<Exact>())));
    write(dir, &alg("su3"), to_text(&AlgebraDoc::from_algebra(&su3::<Exact>())));
    write(dir, &alg("su2_r2"), to_text(&AlgebraDoc::from_structure(&su2_plus_r2_structure::<Exact>())));
    write(dir, &alg("jacobi_violator"), to_text(&AlgebraDoc::from_algebra(&jacobi_violator())));

    let h = KahlerLieAlgebra::<Exact>::standard_flat(2);
    write(dir, &alg("kahler_r4"), to_text(&AlgebraDoc::from_kahler(&h)));
    let omega = h.kahler_form();
    let anti = KForm::<Exact>::basis(4, &[0, 2]).sub(&KForm::basis(4, &[1, 3]));
    write(dir, "forms/omega_kahler.json", to_text(&FormDoc::from_form(&omega)));
    write(dir, "forms/omega_twice_kahler.json", to_text(&FormDoc::from_form(&omega.scale(&Exact::from_int(2)))));
    write(dir, "forms/omega_anti_invariant.json", to_text(&FormDoc::from_form(&anti)));
    write(dir, "forms/omega_zero.json", to_text(&FormDoc::from_form(&KForm::<Exact>::zero(4, 2))));

    write(dir, "matrices/su3_flag_j.json", to_text(&MatrixDoc::from_matrix(&su3_flag_j())));
}
