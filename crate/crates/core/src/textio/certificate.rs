//! Canonical JSON certificates.
//!
//! Objects have sorted keys, rationals are strings `"p/q"`, words are arrays
//! of variable names and polynomials are term lists in descending order.
//! Serializing a parsed canonical document reproduces it byte for byte.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::TextError;
use crate::free_algebra::{parse_rational, rational_to_fraction, Alphabet, Polynomial, Rational, Word};
use crate::groebner::{MembershipCertificate, Summand};
use crate::quiver::{Edge, LabelledQuiver, SignatureSet, StructuralConsistency};
use crate::theorem::{AssumptionCompat, ClaimCompat, CompatibilityReport, ProofCertificate};

pub const CERTIFICATE_FORMAT: &str = "opcert-certificate-v1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    coeff: String,
    word: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssumptionDoc {
    name: String,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    label: String,
    source: String,
    target: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverDoc {
    edges: Vec<EdgeDoc>,
    vertices: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummandDoc {
    coeff: String,
    generator: usize,
    left: Vec<String>,
    right: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssumptionCompatDoc {
    signature: Vec<[String; 2]>,
    uniform: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimCompatDoc {
    compatible: bool,
    signature: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDoc {
    assumptions: Vec<AssumptionCompatDoc>,
    claim: ClaimCompatDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FingerprintDoc {
    assumptions: Vec<String>,
    claim: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    alphabet: Vec<String>,
    assumptions: Vec<AssumptionDoc>,
    claim: Vec<TermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    compat_report: Option<ReportDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    consistency: Option<String>,
    fingerprints: FingerprintDoc,
    format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quiver: Option<QuiverDoc>,
    summands: Vec<SummandDoc>,
}

fn word_doc(w: &Word, a: &Alphabet) -> Vec<String> {
    w.to_names(a)
}

fn poly_doc(p: &Polynomial, a: &Alphabet) -> Vec<TermDoc> {
    p.terms()
        .rev()
        .map(|(w, c)| TermDoc {
            coeff: rational_to_fraction(c),
            word: word_doc(w, a),
        })
        .collect()
}

fn signature_doc(s: &SignatureSet, q: &LabelledQuiver) -> Vec<[String; 2]> {
    s.pairs()
        .into_iter()
        .map(|(v, w)| [q.vertex_name(v).to_owned(), q.vertex_name(w).to_owned()])
        .collect()
}

/// Canonical JSON text, ending in a newline.
pub fn serialize_certificate(cert: &ProofCertificate) -> String {
    let a = &cert.alphabet;
    let doc = CertificateDoc {
        alphabet: a.names().to_vec(),
        assumptions: cert
            .assumption_names
            .iter()
            .zip(&cert.assumptions)
            .map(|(name, p)| AssumptionDoc {
                name: name.clone(),
                terms: poly_doc(p, a),
            })
            .collect(),
        claim: poly_doc(&cert.claim, a),
        compat_report: cert.compat_report.as_ref().zip(cert.quiver.as_ref()).map(|(r, q)| ReportDoc {
            assumptions: r
                .assumptions
                .iter()
                .map(|c| AssumptionCompatDoc {
                    signature: signature_doc(&c.signature, q),
                    uniform: c.uniform,
                })
                .collect(),
            claim: ClaimCompatDoc {
                compatible: r.claim.compatible,
                signature: signature_doc(&r.claim.signature, q),
            },
        }),
        consistency: cert.consistency.map(|c| c.as_str().to_owned()),
        fingerprints: FingerprintDoc {
            assumptions: cert.membership.generator_fingerprints.clone(),
            claim: cert.claim.fingerprint(),
        },
        format: CERTIFICATE_FORMAT.to_owned(),
        quiver: cert.quiver.as_ref().map(|q| QuiverDoc {
            edges: q
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    label: a.name(e.label).to_owned(),
                    source: q.vertex_name(e.source).to_owned(),
                    target: q.vertex_name(e.target).to_owned(),
                })
                .collect(),
            vertices: q.vertices().to_vec(),
        }),
        summands: cert
            .membership
            .summands
            .iter()
            .map(|s| SummandDoc {
                coeff: rational_to_fraction(&s.coeff),
                generator: s.generator,
                left: word_doc(&s.left, a),
                right: word_doc(&s.right, a),
            })
            .collect(),
    };
    // going through Value sorts every object's keys
    let value = serde_json::to_value(&doc).expect("certificate documents are plain data");
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    text
}

fn bad(msg: impl Into<String>) -> TextError {
    TextError::Certificate(msg.into())
}

fn rational(s: &str) -> Result<Rational, TextError> {
    let q = parse_rational(s).ok_or_else(|| bad(format!("invalid rational `{s}`")))?;
    if rational_to_fraction(&q) != s {
        return Err(bad(format!("rational `{s}` is not in lowest terms `p/q` form")));
    }
    Ok(q)
}

fn word(names: &[String], a: &Alphabet) -> Result<Word, TextError> {
    names
        .iter()
        .map(|n| a.var(n).ok_or_else(|| bad(format!("undeclared variable `{n}`"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Word::from)
}

fn poly(terms: &[TermDoc], a: &Alphabet) -> Result<Polynomial, TextError> {
    let mut p = Polynomial::zero();
    for t in terms {
        let w = word(&t.word, a)?;
        if !p.coeff(&w).is_zero() {
            return Err(bad("repeated monomial in term list"));
        }
        p.add_term(rational(&t.coeff)?, w);
    }
    if p.num_terms() != terms.len() {
        return Err(bad("zero coefficient in term list"));
    }
    Ok(p)
}

fn signature(pairs: &[[String; 2]], q: &LabelledQuiver) -> Result<SignatureSet, TextError> {
    let vertex = |n: &String| q.vertex(n).ok_or_else(|| bad(format!("unknown vertex `{n}`")));
    let mut s = SignatureSet::empty(q.num_vertices());
    for [v, w] in pairs {
        s.insert(vertex(v)?, vertex(w)?);
    }
    Ok(s)
}

/// Parses a certificate and checks its fingerprints against the embedded
/// polynomials. Full validity is decided by the theorem checker.
pub fn parse_certificate(text: &str) -> Result<ProofCertificate, TextError> {
    let doc: CertificateDoc = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    if doc.format != CERTIFICATE_FORMAT {
        return Err(bad(format!("unsupported format `{}`", doc.format)));
    }
    let a = Alphabet::new(doc.alphabet.iter().cloned()).map_err(|e| bad(e.to_string()))?;
    let mut assumption_names = Vec::new();
    let mut assumptions = Vec::new();
    for d in &doc.assumptions {
        assumption_names.push(d.name.clone());
        assumptions.push(poly(&d.terms, &a)?);
    }
    let claim = poly(&doc.claim, &a)?;

    if doc.fingerprints.assumptions.len() != assumptions.len() {
        return Err(TextError::FingerprintMismatch("assumption list".into()));
    }
    for ((fp, p), name) in doc.fingerprints.assumptions.iter().zip(&assumptions).zip(&assumption_names) {
        if *fp != p.fingerprint() {
            return Err(TextError::FingerprintMismatch(format!("assumption `{name}`")));
        }
    }
    if doc.fingerprints.claim != claim.fingerprint() {
        return Err(TextError::FingerprintMismatch("claim".into()));
    }

    let quiver = doc
        .quiver
        .as_ref()
        .map(|qd| {
            let vertex = |n: &String| {
                qd.vertices
                    .iter()
                    .position(|v| v == n)
                    .ok_or_else(|| bad(format!("unknown vertex `{n}`")))
            };
            let edges = qd
                .edges
                .iter()
                .map(|e| {
                    Ok(Edge {
                        source: vertex(&e.source)?,
                        target: vertex(&e.target)?,
                        label: a.var(&e.label).ok_or_else(|| bad(format!("undeclared label `{}`", e.label)))?,
                    })
                })
                .collect::<Result<Vec<_>, TextError>>()?;
            LabelledQuiver::new(&a, qd.vertices.clone(), edges).map_err(|e| bad(e.to_string()))
        })
        .transpose()?;

    let compat_report = match (&doc.compat_report, &quiver) {
        (None, _) => None,
        (Some(_), None) => return Err(bad("compatibility report without a quiver")),
        (Some(r), Some(q)) => Some(CompatibilityReport {
            assumptions: r
                .assumptions
                .iter()
                .map(|c| {
                    Ok(AssumptionCompat {
                        uniform: c.uniform,
                        signature: signature(&c.signature, q)?,
                    })
                })
                .collect::<Result<Vec<_>, TextError>>()?,
            claim: ClaimCompat {
                compatible: r.claim.compatible,
                signature: signature(&r.claim.signature, q)?,
            },
        }),
    };
    let consistency = doc
        .consistency
        .as_deref()
        .map(|s| StructuralConsistency::from_str_tag(s).ok_or_else(|| bad(format!("unknown consistency verdict `{s}`"))))
        .transpose()?;

    let summands = doc
        .summands
        .iter()
        .map(|s| {
            Ok(Summand {
                coeff: rational(&s.coeff)?,
                left: word(&s.left, &a)?,
                generator: s.generator,
                right: word(&s.right, &a)?,
            })
        })
        .collect::<Result<Vec<_>, TextError>>()?;

    Ok(ProofCertificate {
        alphabet: a,
        assumption_names,
        membership: MembershipCertificate {
            claim: claim.clone(),
            summands,
            generator_fingerprints: doc.fingerprints.assumptions,
        },
        assumptions,
        claim,
        quiver,
        compat_report,
        consistency,
    })
}
