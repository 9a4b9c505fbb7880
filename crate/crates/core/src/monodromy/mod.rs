//! Permutation monodromy of root configurations along loops in `Poly_n`,
//! and the certificate that the quartic resolvent induces the exceptional
//! surjection `S_4 -> S_3`.

mod braid;
mod path;
mod permutation;
mod track;

pub use braid::{elementary_braid_loop, BRAID_WAYPOINTS};
pub use path::{CoefficientPath, DEFAULT_SAMPLES};
pub use permutation::{generated_group, Permutation};
pub use track::{loop_permutation, track_path, MonodromyResult};

use crate::cert::Certificate;
use crate::error::Result;
use crate::par::{self, Exec};
use crate::poly_core::{Configuration, TolerancePolicy};
use crate::poly_maps::resolve_quartic;

/// Monodromy of one braid generator before and after the resolvent.
#[derive(Debug, Clone)]
struct GeneratorImage {
    lift: MonodromyResult,
    image: MonodromyResult,
    square: MonodromyResult,
}

fn generator_image(
    i: usize,
    base: &Configuration,
    tol: &TolerancePolicy,
) -> Result<GeneratorImage> {
    let quartic_loop = elementary_braid_loop(4, i, base, tol)?;
    let lift = loop_permutation(&quartic_loop, tol)?;
    let pushed = quartic_loop.map_waypoints(|w| Ok(resolve_quartic(w, tol)?.output), tol)?;
    let image = loop_permutation(&pushed, tol)?;
    let square = loop_permutation(&pushed.concat(&pushed)?, tol)?;
    Ok(GeneratorImage {
        lift,
        image,
        square,
    })
}

/// Builds the certificate for the exceptional surjection, recording any
/// tracking failure as a failed check rather than an error.
pub fn exceptional_surjection_certificate(tol: &TolerancePolicy, exec: Exec) -> Certificate {
    let mut cert = Certificate::new("certify-s4s3", *tol, 0);
    let base =
        Configuration::from_real(&[0.0, 1.0, 2.0, 3.0], false).expect("fixed basepoint is valid");
    cert.input("basepoint", &base)
        .input("generators", &["sigma_1", "sigma_2", "sigma_3"])
        .input("braid_waypoints", &BRAID_WAYPOINTS)
        .input("samples_per_segment", &DEFAULT_SAMPLES);
    match resolve_quartic(&crate::poly_core::from_roots(&base), tol) {
        Ok(r) => {
            cert.output("basepoint_resolvent", &r);
        }
        Err(e) => {
            cert.error("basepoint_resolvent", &e);
            return cert;
        }
    }
    let results = par::map_indices(exec, 3, |k| generator_image(k + 1, &base, tol));
    let mut images = Vec::new();
    for (k, res) in results.into_iter().enumerate() {
        let name = format!("sigma_{}", k + 1);
        let g = match res {
            Ok(g) => g,
            Err(e) => {
                cert.error(format!("{name}/tracking"), &e);
                continue;
            }
        };
        let expected = Permutation::transposition(4, k, k + 1).expect("valid indices");
        cert.check(
            format!("{name}/lift_is_transposition"),
            g.lift.permutation == expected,
            format!("S_4 monodromy {} (expected {expected})", g.lift.permutation),
            g.lift.permutation.cycles().len() as f64,
        );
        let cycles = g.image.permutation.cycles();
        cert.check(
            format!("{name}/image_is_transposition"),
            cycles.len() == 1 && cycles[0].len() == 2,
            format!("S_3 monodromy {}", g.image.permutation),
            cycles.len() as f64,
        );
        let min_sep = g
            .lift
            .min_separation_along_path
            .min(g.image.min_separation_along_path)
            .min(g.square.min_separation_along_path);
        cert.check(
            format!("{name}/separation"),
            min_sep > 10.0 * tol.distinct_tol,
            "minimum root separation along the loop exceeds 10 distinct_tol",
            min_sep,
        );
        cert.check(
            format!("clause_c/{name}_squared_is_identity"),
            g.square.permutation.is_identity(),
            format!("monodromy of the doubled loop {}", g.square.permutation),
            g.square.permutation.cycles().len() as f64,
        );
        cert.output(
            &name,
            &serde_json::json!({
                "lift": g.lift,
                "image": g.image,
                "image_cycles": g.image.permutation.to_string(),
                "square": g.square.permutation,
            }),
        );
        images.push(g.image.permutation);
    }
    if images.len() == 3 {
        let group = generated_group(&images);
        cert.check(
            "clause_a/images_generate_s3",
            group.len() == 6,
            format!("images generate a group of order {}", group.len()),
            group.len() as f64,
        );
        cert.check(
            "clause_b/sigma_1_and_sigma_3_agree",
            images[0] == images[2],
            format!(
                "sigma_1 -> {}, sigma_3 -> {}; the Klein four-group maps to the identity",
                images[0], images[2]
            ),
            if images[0] == images[2] { 0.0 } else { 1.0 },
        );
    }
    cert
}

/// The exceptional surjection `S_4 -> S_3` induced by the resolvent:
/// generator images generate `S_3`, `sigma_1` and `sigma_3` agree, and every
/// `sigma_i^2` acts trivially. Fails with `CertificateFailed` naming the
/// first violated clause.
pub fn certify_exceptional_surjection(tol: &TolerancePolicy) -> Result<Certificate> {
    exceptional_surjection_certificate(tol, Exec::default()).into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceptional_surjection_is_certified() {
        let cert = certify_exceptional_surjection(&TolerancePolicy::default()).unwrap();
        assert!(cert.passed());
        let s1 = &cert.outputs()["sigma_1"]["image"]["permutation"];
        let s3 = &cert.outputs()["sigma_3"]["image"]["permutation"];
        assert_eq!(s1, s3);
        let s2 = &cert.outputs()["sigma_2"]["image"]["permutation"];
        assert_ne!(s1, s2);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let t = TolerancePolicy::default();
        let a = exceptional_surjection_certificate(&t, Exec::Sequential);
        let b = exceptional_surjection_certificate(&t, Exec::Parallel);
        assert_eq!(a.to_json(), b.to_json());
    }
}
