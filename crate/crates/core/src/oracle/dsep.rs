use super::{CiTest, CountingOracle, IndependenceOracle};
use crate::error::{Error, Result};
use crate::graph::{d_separated, m_separated, CausalDag, Mag, Role, VarId, VarSet};

/// Ground-truth backend: d-separation in a causal DAG, with the selection
/// variables always added to the conditioning set. Queries use observed
/// positions (`0..|observed|`), not DAG ids.
#[derive(Debug, Clone)]
pub struct DsepTest {
    dag: CausalDag,
}

impl DsepTest {
    pub fn new(dag: CausalDag) -> Self {
        DsepTest { dag }
    }

    pub fn dag(&self) -> &CausalDag {
        &self.dag
    }

    fn lift(&self, v: VarId) -> VarId {
        self.dag.observed()[v.0]
    }

    /// Position of a DAG variable among the observed ones.
    pub fn observed_position(&self, v: VarId) -> Result<VarId> {
        self.dag.graph().check_var(v)?;
        if self.dag.role(v) != Role::Observed {
            return Err(Error::NotObserved(v));
        }
        Ok(VarId(self.dag.observed().binary_search(&v).expect("observed variable")))
    }
}

impl CiTest for DsepTest {
    fn num_vars(&self) -> usize {
        self.dag.observed().len()
    }

    fn names(&self) -> Vec<String> {
        self.dag.observed_names()
    }

    fn independent(&self, x: VarId, y: VarId, z: &VarSet) -> Result<bool> {
        let mut cond: VarSet = z.iter().map(|&v| self.lift(v)).collect();
        cond.extend(self.dag.selection().iter().copied());
        d_separated(&self.dag, self.lift(x), self.lift(y), &cond)
    }
}

pub type DsepOracle = CountingOracle<DsepTest>;

impl CountingOracle<DsepTest> {
    pub fn from_dag(dag: CausalDag) -> Self {
        CountingOracle::new(DsepTest::new(dag))
    }

    /// Query phrased in DAG ids. Latent or selection variables are rejected.
    pub fn query_dag(&mut self, x: VarId, y: VarId, z: &VarSet) -> Result<bool> {
        let t = self.backend();
        let px = t.observed_position(x)?;
        let py = t.observed_position(y)?;
        let pz = z.iter().map(|&v| t.observed_position(v)).collect::<Result<VarSet>>()?;
        self.query(px, py, &pz)
    }
}

/// m-separation in a MAG; variables are the MAG's vertices.
#[derive(Debug, Clone)]
pub struct MagTest {
    mag: Mag,
}

impl MagTest {
    pub fn new(mag: Mag) -> Self {
        MagTest { mag }
    }

    pub fn mag(&self) -> &Mag {
        &self.mag
    }
}

impl CiTest for MagTest {
    fn num_vars(&self) -> usize {
        self.mag.graph().n()
    }

    fn names(&self) -> Vec<String> {
        self.mag.graph().names().to_vec()
    }

    fn independent(&self, x: VarId, y: VarId, z: &VarSet) -> Result<bool> {
        m_separated(&self.mag, x, y, z)
    }
}

pub type MagOracle = CountingOracle<MagTest>;

impl CountingOracle<MagTest> {
    pub fn from_mag(mag: Mag) -> Self {
        CountingOracle::new(MagTest::new(mag))
    }
}
