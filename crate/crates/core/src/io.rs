//! JSON file formats for states, operators and codes.
//!
//! Every file may start with `#` comment lines describing its contents. They
//! are blanked out before parsing, so serde_json's line numbers stay accurate.
//!
//! - `.state`: `{"dims": [..], "conductor": N, "amps": [c, ..]}`, amplitudes in
//!   row-major order with site 0 slowest.
//! - `.op`: `{"scalar": c, "factors": [[c, ..], ..]}`, each factor a flattened
//!   row-major square matrix.
//! - `.ops`: a JSON array of operators.
//! - `.code`: `{"dims": [..], "conductor": N, "claimed_distance": d?, "basis": [[c, ..], ..]}`.
//!
//! Here `c` is a cyclotomic number `{"conductor": N, "coeffs": ["p/q", ..]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constants;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qecc::CodeSubspace;
use crate::tensor::{LocalOperator, PureState};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub conductor: u32,
    pub amps: Vec<Cyclo>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub scalar: Cyclo,
    pub factors: Vec<Vec<Cyclo>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub dims: Vec<usize>,
    pub conductor: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_distance: Option<usize>,
    pub basis: Vec<Vec<Cyclo>>,
}

fn check_conductor(values: &[Cyclo], conductor: u32, field: &str) -> Result<()> {
    match values.iter().position(|c| c.conductor() != conductor) {
        Some(i) => Err(Error::Parse(format!(
            "{field}[{i}] has conductor {}, file declares {conductor}",
            values[i].conductor()
        ))),
        None => Ok(()),
    }
}

impl StateFile {
    pub fn from_state(v: &PureState) -> Self {
        StateFile {
            dims: v.dims().to_vec(),
            conductor: v.conductor(),
            amps: v.amps().to_vec(),
        }
    }

    pub fn into_state(self) -> Result<PureState> {
        check_conductor(&self.amps, self.conductor, "amps")?;
        PureState::new(self.dims, self.amps)
    }
}

impl OperatorFile {
    pub fn from_operator(op: &LocalOperator) -> Self {
        OperatorFile {
            scalar: op.scalar().clone(),
            factors: op.factors().iter().map(|f| f.entries().to_vec()).collect(),
        }
    }

    /// Validates square factors over one field and brings the operator to
    /// canonical form.
    pub fn into_operator(self) -> Result<LocalOperator> {
        let conductor = self.scalar.conductor();
        let factors = self
            .factors
            .into_iter()
            .enumerate()
            .map(|(k, f)| {
                check_conductor(&f, conductor, &format!("factors[{k}]"))?;
                Matrix::from_flat_square(f)
                    .map_err(|e| Error::Parse(format!("factors[{k}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::Parse("operator has no factors".into()));
        }
        LocalOperator::new(self.scalar, factors)
    }
}

impl CodeFile {
    pub fn from_code(code: &CodeSubspace) -> Self {
        CodeFile {
            dims: code.basis()[0].dims().to_vec(),
            conductor: code.conductor(),
            claimed_distance: code.claimed_distance(),
            basis: code.basis().iter().map(|u| u.amps().to_vec()).collect(),
        }
    }

    /// Checks dimensions, then exact orthonormality.
    pub fn into_code(self) -> Result<CodeSubspace> {
        let basis = self
            .basis
            .into_iter()
            .enumerate()
            .map(|(i, amps)| {
                check_conductor(&amps, self.conductor, &format!("basis[{i}]"))?;
                PureState::new(self.dims.clone(), amps)
            })
            .collect::<Result<Vec<_>>>()?;
        if basis.is_empty() {
            return Err(Error::Parse("code has an empty basis".into()));
        }
        CodeSubspace::new(basis, self.claimed_distance)
    }
}

/// Blanks `#` lines so JSON parse errors still point at the right line.
pub fn strip_header(text: &str) -> String {
    text.lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n")
}

/// The leading `#` lines, without the marker.
pub fn header_lines(text: &str) -> Vec<String> {
    text.lines()
        .take_while(|l| l.trim_start().starts_with('#'))
        .map(|l| l.trim_start().trim_start_matches('#').trim().to_string())
        .collect()
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(&strip_header(text)).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })
}

pub fn parse_state(text: &str) -> Result<PureState> {
    parse::<StateFile>(text)?.into_state()
}

pub fn parse_operator(text: &str) -> Result<LocalOperator> {
    parse::<OperatorFile>(text)?.into_operator()
}

pub fn parse_operators(text: &str) -> Result<Vec<LocalOperator>> {
    parse::<Vec<OperatorFile>>(text)?
        .into_iter()
        .enumerate()
        .map(|(i, f)| f.into_operator().map_err(|e| Error::Parse(format!("operator {i}: {e}"))))
        .collect()
}

pub fn parse_code(text: &str) -> Result<CodeSubspace> {
    parse::<CodeFile>(text)?.into_code()
}

#[derive(Clone, Debug)]
pub enum Ingested {
    State(PureState),
    Operators(Vec<LocalOperator>),
    Code(CodeSubspace),
}

impl Ingested {
    pub fn kind(&self) -> &'static str {
        match self {
            Ingested::State(_) => "state",
            Ingested::Operators(_) => "operators",
            Ingested::Code(_) => "code",
        }
    }

    pub fn to_file_string(&self, header: &[&str]) -> Result<String> {
        match self {
            Ingested::State(v) => write_state(v, header),
            Ingested::Operators(ops) => write_operators(ops, header),
            Ingested::Code(c) => write_code(c, header),
        }
    }
}

/// Parses any of the formats, telling them apart by their JSON shape.
pub fn ingest_str(text: &str) -> Result<Ingested> {
    let value: Value = parse(text)?;
    match &value {
        Value::Array(_) => parse_operators(text).map(Ingested::Operators),
        Value::Object(m) if m.contains_key("basis") => parse_code(text).map(Ingested::Code),
        Value::Object(m) if m.contains_key("amps") => parse_state(text).map(Ingested::State),
        Value::Object(m) if m.contains_key("factors") => {
            parse_operator(text).map(|op| Ingested::Operators(vec![op]))
        }
        _ => Err(Error::Parse(
            "expected a state, operator, operator list or code".into(),
        )),
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn ingest(path: &Path) -> Result<Ingested> {
    ingest_str(&read_to_string(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn with_header<T: Serialize>(value: &T, header: &[&str]) -> Result<String> {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?);
    out.push('\n');
    Ok(out)
}

pub fn write_state(v: &PureState, header: &[&str]) -> Result<String> {
    with_header(&StateFile::from_state(v), header)
}

pub fn write_operators(ops: &[LocalOperator], header: &[&str]) -> Result<String> {
    let files: Vec<OperatorFile> = ops.iter().map(OperatorFile::from_operator).collect();
    with_header(&files, header)
}

pub fn write_code(code: &CodeSubspace, header: &[&str]) -> Result<String> {
    with_header(&CodeFile::from_code(code), header)
}

/// The data files shipped in `crates/core/data`, generated from [`constants`].
pub fn shipped_files() -> Result<Vec<(&'static str, String)>> {
    let code = CodeSubspace::new(constants::code_basis(), Some(2))?;
    let weyl: Vec<LocalOperator> = constants::tabulated_weyl_generators()
        .into_iter()
        .map(|r| LocalOperator::new(Cyclo::one(r.conductor()), vec![r]))
        .collect::<Result<_>>()?;
    Ok(vec![
        (
            "phi.state",
            write_state(
                &constants::phi(),
                &[
                    "4-qutrit AME state |Phi>, amplitudes 1/sqrt(3) on nine kets, <Phi|Phi> = 3",
                    "conductor 12: Q(zeta_12)",
                ],
            )?,
        ),
        (
            "c332.code",
            write_code(
                &code,
                &["((3,3,2))_3 code: |s1>, |s2>, |s3>, each an equal superposition of three kets"],
            )?,
        ),
        (
            "weyl-generators.ops",
            write_operators(
                &weyl,
                &[
                    "order-3 reflections R1, R2, R3 generating the Weyl group W(C) of order 648",
                    "single-site operators on code coordinates, in canonical form",
                ],
            )?,
        ),
        (
            "local-symmetry-generators.ops",
            write_operators(
                &constants::local_symmetry_generators(),
                &["five generators of the local symmetry group of |Phi> (order 5832), in canonical form"],
            )?,
        ),
        (
            "coset-reps.ops",
            write_operators(
                &constants::coset_representatives(),
                &["coset representatives Q1, Q2, Q3 in SU(3)^{x3} with mu(Qi) = Ri, in canonical form"],
            )?,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn data_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
    }

    #[test]
    fn shipped_data_matches_constants() {
        let regenerate = std::env::var_os("AME_REGENERATE_DATA").is_some();
        for (name, text) in shipped_files().unwrap() {
            let path = data_dir().join(name);
            if regenerate {
                fs::write(&path, &text).unwrap();
            }
            assert_eq!(read_to_string(&path).unwrap(), text, "{name} is stale");
        }
    }

    #[test]
    fn shipped_files_roundtrip() {
        for (name, _) in shipped_files().unwrap() {
            let text = read_to_string(&data_dir().join(name)).unwrap();
            let first = ingest_str(&text).unwrap();
            let again = ingest_str(&first.to_file_string(&[]).unwrap()).unwrap();
            match (first, again) {
                (Ingested::State(a), Ingested::State(b)) => {
                    assert_eq!(a, b);
                    assert_eq!(a, constants::phi());
                }
                (Ingested::Code(a), Ingested::Code(b)) => {
                    assert_eq!(a.basis(), b.basis());
                    assert_eq!(a.dimension(), 3);
                }
                (Ingested::Operators(a), Ingested::Operators(b)) => assert_eq!(a, b),
                _ => panic!("{name} changed kind"),
            }
        }
    }

    #[test]
    fn headers_are_reported() {
        let text = write_state(&constants::phi(), &["one", "two"]).unwrap();
        assert_eq!(header_lines(&text), vec!["one", "two"]);
    }

    #[test]
    fn non_orthonormal_code_is_rejected() {
        let mut file = CodeFile::from_code(&CodeSubspace::new(constants::code_basis(), None).unwrap());
        file.basis[1] = file.basis[0].clone();
        let text = serde_json::to_string(&file).unwrap();
        assert!(matches!(ingest_str(&text), Err(Error::InvalidCode(_))));
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = ingest_str("# header\n{\"dims\": [3],\n \"conductor\": 12, \"amps\": [1]}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(ingest_str("{\"dims\": [2], \"conductor\": 12, \"amps\": []}").is_err());
        assert!(ingest_str("42").is_err());
    }

    #[test]
    fn operators_are_canonicalized_on_ingest() {
        let q2 = constants::coset_representatives()[1].clone();
        let raw = OperatorFile {
            scalar: Cyclo::from_ratio(1, 3, 12) * constants::inv_sqrt3() * constants::zeta12(),
            factors: vec![constants::omega_circulant().entries().to_vec(); 3],
        };
        let text = serde_json::to_string(&raw).unwrap();
        assert_eq!(parse_operator(&text).unwrap(), q2);
    }
}
