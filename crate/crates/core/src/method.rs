//! Evaluation strategies, registered by name and chosen at run time.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::catalog::AlgebraSpec;
use crate::closed_forms;
use crate::error::{Error, Result};
use crate::exact::PiValue;
use crate::oracle::Normalization;
use crate::reduction::{reduce_by_tree_with, ReductionOptions};
use crate::tree::ComputationTree;

/// Computes zeta_W(s; g) for even s.
pub trait EvaluationMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn zeta_w(&self, spec: &AlgebraSpec, s: u32) -> Result<PiValue>;
}

/// Reduction of Z(sigma, s) along a computation tree, then zeta_W = M^s Z / |W|.
#[derive(Default)]
pub struct TreeMethod {
    pub tree: Option<ComputationTree>,
    pub options: ReductionOptions,
}


impl EvaluationMethod for TreeMethod {
    fn name(&self) -> &'static str {
        "tree"
    }

    fn zeta_w(&self, spec: &AlgebraSpec, s: u32) -> Result<PiValue> {
        let tree = self.tree.as_ref().unwrap_or(&spec.tree);
        let z = reduce_by_tree_with(&spec.matrix(s), tree, self.options)?;
        let scale = BigRational::new(BigInt::from(spec.m_constant).pow(s), BigInt::from(spec.weyl_order));
        Ok(z.scale(&scale))
    }
}

pub struct ClosedMethod;

impl EvaluationMethod for ClosedMethod {
    fn name(&self) -> &'static str {
        "closed"
    }

    fn zeta_w(&self, spec: &AlgebraSpec, s: u32) -> Result<PiValue> {
        closed_forms::closed_form(spec.name)?.zeta_w(s)
    }
}

pub fn methods() -> Vec<Box<dyn EvaluationMethod>> {
    vec![Box::new(TreeMethod::default()), Box::new(ClosedMethod)]
}

pub fn method(name: &str) -> Result<Box<dyn EvaluationMethod>> {
    methods()
        .into_iter()
        .find(|m| m.name() == name)
        .ok_or_else(|| Error::UnknownMethod(name.to_string()))
}

/// Converts zeta_W(s) to the requested normalisation.
pub fn normalize(spec: &AlgebraSpec, s: u32, v: PiValue, norm: Normalization) -> PiValue {
    match norm.resolve(spec) {
        Normalization::Witten | Normalization::Native => v,
        Normalization::Bare => v.scale(&BigRational::new(1.into(), BigInt::from(spec.m_constant).pow(s))),
    }
}

/// zeta at s = 2m by the named method.
pub fn compute(spec: &AlgebraSpec, m: u32, method_name: &str, norm: Normalization) -> Result<PiValue> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let s = 2 * m;
    let v = method(method_name)?.zeta_w(spec, s)?;
    Ok(normalize(spec, s, v, norm))
}
