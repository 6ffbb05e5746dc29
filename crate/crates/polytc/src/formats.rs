//! JSON shapes for codes, enumerations, certificates, classes and reports.

use anyhow::{anyhow, bail, Context, Result};
use polytc_core::bounds::{TCBoundReport, Verification};
use polytc_core::{
    Certificate, CohoClass, EnumeratedCode, Factor, FactorKind, Generator, GeneticCode, IndexSet, LengthVector,
    RingPresentation,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDto {
    pub n: usize,
    /// Genes, each listing `n` last.
    pub genes: Vec<Vec<usize>>,
}

impl From<&GeneticCode> for CodeDto {
    fn from(c: &GeneticCode) -> Self {
        CodeDto { n: c.n(), genes: c.genes().iter().map(|g| g.to_vec()).collect() }
    }
}

impl TryFrom<&CodeDto> for GeneticCode {
    type Error = anyhow::Error;

    fn try_from(d: &CodeDto) -> Result<Self> {
        let genes: Vec<&[usize]> = d.genes.iter().map(Vec::as_slice).collect();
        GeneticCode::parse(d.n, &genes).map_err(|e| anyhow!("{e}"))
    }
}

/// Parses `<{2,4,7},{5,7}>`, `{2,4,7},{5,7}` or `2,4,7;5,7`; `n` is the
/// largest entry.
pub fn parse_code(text: &str) -> Result<GeneticCode> {
    let body: String = text.chars().filter(|c| !matches!(c, '<' | '>' | ' ' | '⟨' | '⟩')).collect();
    let groups: Vec<&str> = if body.contains('{') {
        body.split('}').map(|g| g.trim_start_matches(',').trim_start_matches('{')).filter(|g| !g.is_empty()).collect()
    } else {
        body.split(';').filter(|g| !g.is_empty()).collect()
    };
    if groups.is_empty() {
        bail!("no genes in {text:?}");
    }
    let genes = groups
        .iter()
        .map(|g| {
            g.split(',')
                .map(|x| x.parse::<usize>().with_context(|| format!("bad index {x:?} in {text:?}")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = genes.iter().flatten().copied().max().unwrap_or(0);
    let refs: Vec<&[usize]> = genes.iter().map(Vec::as_slice).collect();
    GeneticCode::parse(n, &refs).map_err(|e| anyhow!("{e}"))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumeratedDto {
    pub genes: Vec<Vec<usize>>,
    /// Gene sizes, largest first.
    pub signature: Vec<usize>,
    pub witness: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumerationFile {
    pub n: usize,
    pub codes: Vec<EnumeratedDto>,
}

impl EnumerationFile {
    pub fn new(n: usize, codes: &[EnumeratedCode]) -> Self {
        let codes = codes
            .iter()
            .map(|e| EnumeratedDto {
                genes: CodeDto::from(&e.code).genes,
                signature: e.code.gene_sizes(),
                witness: e.witness.entries().to_vec(),
            })
            .collect();
        EnumerationFile { n, codes }
    }

    /// Rebuilds the codes, checking that every witness still produces its code.
    pub fn codes(&self) -> Result<Vec<EnumeratedCode>> {
        self.codes
            .iter()
            .map(|d| {
                let code = GeneticCode::try_from(&CodeDto { n: self.n, genes: d.genes.clone() })?;
                let witness = LengthVector::generic(d.witness.clone()).map_err(|e| anyhow!("{e}"))?;
                let produced = witness.genetic_code().map_err(|e| anyhow!("{e}"))?;
                if produced != code {
                    bail!("witness {witness} gives {produced}, not {code}");
                }
                Ok(EnumeratedCode { code, witness })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDto {
    Bar,
    Embed,
    Diff,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDto {
    pub kind: KindDto,
    pub pos: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<usize>,
    /// `"R"` or `"V<i>"`.
    pub gen: String,
    pub exp: usize,
}

pub fn parse_generator(s: &str) -> Result<Generator> {
    match s {
        "R" => Ok(Generator::R),
        _ => s
            .strip_prefix('V')
            .and_then(|i| i.parse().ok())
            .map(Generator::V)
            .ok_or_else(|| anyhow!("unknown generator {s:?}")),
    }
}

impl From<&Factor> for FactorDto {
    fn from(f: &Factor) -> Self {
        let (kind, to) = match f.kind {
            FactorKind::Bar => (KindDto::Bar, None),
            FactorKind::Embed => (KindDto::Embed, None),
            FactorKind::Diff { to } => (KindDto::Diff, Some(to)),
        };
        FactorDto { kind, pos: f.pos, to, gen: f.gen.to_string(), exp: f.exp }
    }
}

impl TryFrom<&FactorDto> for Factor {
    type Error = anyhow::Error;

    fn try_from(d: &FactorDto) -> Result<Self> {
        let gen = parse_generator(&d.gen)?;
        Ok(match (&d.kind, d.to) {
            (KindDto::Bar, None) => Factor::bar(d.pos, gen, d.exp),
            (KindDto::Embed, None) => Factor::embed(d.pos, gen, d.exp),
            (KindDto::Diff, Some(to)) => Factor::diff(d.pos, to, gen, d.exp),
            (KindDto::Diff, None) => bail!("diff factor without \"to\""),
            (_, Some(_)) => bail!("only diff factors take \"to\""),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDto {
    pub code: CodeDto,
    pub k: usize,
    pub factors: Vec<FactorDto>,
    pub length: usize,
}

impl From<&Certificate> for CertificateDto {
    fn from(c: &Certificate) -> Self {
        CertificateDto {
            code: CodeDto::from(&c.code),
            k: c.k,
            factors: c.factors.iter().map(FactorDto::from).collect(),
            length: c.length(),
        }
    }
}

impl TryFrom<&CertificateDto> for Certificate {
    type Error = anyhow::Error;

    fn try_from(d: &CertificateDto) -> Result<Self> {
        let mut c = Certificate::new(GeneticCode::try_from(&d.code)?, d.k);
        for f in &d.factors {
            c.factors.push(Factor::try_from(f)?);
        }
        if c.length() != d.length {
            bail!("declared length {} but the factors have length {}", d.length, c.length());
        }
        Ok(c)
    }
}

/// A cohomology class as a sum of monomials `R^r V_S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDto {
    pub degree: usize,
    pub support: Vec<(usize, Vec<usize>)>,
}

impl ClassDto {
    pub fn new(ring: &RingPresentation, x: &CohoClass) -> Self {
        ClassDto { degree: x.degree(), support: ring.support(x).into_iter().map(|(r, s)| (r, s.to_vec())).collect() }
    }

    pub fn to_class(&self, ring: &RingPresentation) -> Result<CohoClass> {
        let mut x = ring.zero(self.degree);
        for (r, s) in &self.support {
            let s = IndexSet::from_indices(s.iter().copied());
            if r + s.len() != self.degree {
                bail!("monomial R^{r} V_{s} is not of degree {}", self.degree);
            }
            x = ring.add(&x, &ring.monomial(*r, s).map_err(|e| anyhow!("{e}"))?);
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDto {
    pub code: CodeDto,
    pub k: usize,
    pub m: usize,
    pub lower: usize,
    pub upper: usize,
    pub method: String,
    pub hypotheses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDto>,
    pub verification: String,
    pub caveats: Vec<String>,
}

pub fn verification_tag(v: Verification) -> &'static str {
    match v {
        Verification::Verified => "verified",
        Verification::Unverified => "unverified",
        Verification::NotNeeded => "not-needed",
    }
}

impl From<&TCBoundReport> for ReportDto {
    fn from(r: &TCBoundReport) -> Self {
        ReportDto {
            code: CodeDto::from(&r.code),
            k: r.k,
            m: r.m,
            lower: r.lower,
            upper: r.upper,
            method: r.method.tag().into(),
            hypotheses: r.hypotheses.clone(),
            certificate: r.certificate.as_ref().map(CertificateDto::from),
            verification: verification_tag(r.verification).into(),
            caveats: r.caveats.clone(),
        }
    }
}
