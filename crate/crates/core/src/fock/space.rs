use super::cache::SectorCache;
use super::{
    sector_basis, sector_size, FockConfig, FockError, FockSector, GramMatrix, PositivityReport,
    Quotient,
};
use crate::linalg::{
    c64, columns_to_matrix, dagger, hermitian_residual, hermitian_spectrum, identity,
    kernel_basis, max_abs, max_abs_diff, span_and_complement, Matrix, Vector,
};
use crate::operators::{build_ttilde, CheckStatus, StatisticsSystem, SystemKey};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Creation and annihilation matrices compressed to quotient sectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DescendedOperators {
    pub species: usize,
    pub n: usize,
    /// Quotient sector `n` → `n + 1`.
    pub creation: Matrix,
    /// Quotient sector `n` → `n − 1`; absent on the vacuum sector.
    pub annihilation: Option<Matrix>,
    /// `max |proj_{S⊥}(c_i S_n)|`
    pub creation_residual: f64,
    /// `max |proj_{S⊥}(a_i S_n)|`
    pub annihilation_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorCheck {
    pub status: CheckStatus,
    pub residual: f64,
}

/// Per-sector summary emitted by the CLI as JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorReport {
    pub sector: usize,
    pub dim: usize,
    pub quotient_dim: Option<usize>,
    pub min_eig: Option<f64>,
    pub kernel_dim: usize,
    pub checks: BTreeMap<String, SectorCheck>,
}

/// Fock representation of one statistics system.
///
/// Matrices are computed lazily and memoized in a [`SectorCache`] that may be
/// shared between spaces and threads.
#[derive(Debug, Clone)]
pub struct FockSpace {
    system: Arc<StatisticsSystem>,
    key: SystemKey,
    config: FockConfig,
    cache: Arc<SectorCache>,
}

impl FockSpace {
    pub fn new(system: StatisticsSystem) -> Self {
        Self::with_config(system, FockConfig::default())
    }

    pub fn with_config(system: StatisticsSystem, config: FockConfig) -> Self {
        Self::with_cache(system, config, Arc::new(SectorCache::new()))
    }

    pub fn with_cache(system: StatisticsSystem, config: FockConfig, cache: Arc<SectorCache>) -> Self {
        let key = system.content_key();
        Self {
            system: Arc::new(system),
            key,
            config,
            cache,
        }
    }

    pub fn system(&self) -> &StatisticsSystem {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    pub fn config(&self) -> FockConfig {
        self.config
    }

    pub fn key(&self) -> SystemKey {
        self.key
    }

    pub fn cache(&self) -> &Arc<SectorCache> {
        &self.cache
    }

    fn size(&self, n: usize) -> Result<usize, FockError> {
        sector_size(self.dim(), n, self.config.cap)
    }

    fn check_species(&self, species: usize) -> Result<usize, FockError> {
        if species == 0 || species > self.dim() {
            return Err(FockError::SpeciesOutOfRange {
                species,
                dim: self.dim(),
            });
        }
        Ok(species - 1)
    }

    pub fn sector_basis(&self, n: usize) -> Result<FockSector, FockError> {
        sector_basis(self.dim(), n, self.config.cap)
    }

    /// All creation matrices `c_i : sector n → sector n + 1`.
    pub fn creators(&self, n: usize) -> Result<Arc<Vec<Matrix>>, FockError> {
        self.cache.creators.get_or_try_insert((self.key, n), || {
            let dim = self.dim();
            let src = self.size(n)?;
            self.size(n + 1)?;
            Ok((0..dim)
                .map(|i| {
                    let mut c = Matrix::zeros(dim * src, src);
                    for o in 0..src {
                        c[(i * src + o, o)] = c64(1.0, 0.0);
                    }
                    c
                })
                .collect())
        })
    }

    /// All annihilation matrices `a_i : sector n → sector n − 1`, `n ≥ 1`.
    pub fn annihilators(&self, n: usize) -> Result<Arc<Vec<Matrix>>, FockError> {
        if n == 0 {
            return Err(FockError::VacuumAnnihilation(0));
        }
        self.cache
            .annihilators
            .get_or_try_insert((self.key, n), || self.build_annihilators(n))
    }

    fn build_annihilators(&self, n: usize) -> Result<Vec<Matrix>, FockError> {
        let dim = self.dim();
        let src = self.size(n)?;
        let dst = src / dim;
        if n == 1 {
            return Ok((0..dim)
                .map(|i| {
                    let mut a = Matrix::zeros(1, dim);
                    a[(0, i)] = c64(1.0, 0.0);
                    a
                })
                .collect());
        }
        let prev = self.annihilators(n - 1)?;
        let inner = dst / dim;
        let t = &self.system.cross;
        let mut out = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut a = Matrix::zeros(dst, src);
            for j in 0..dim {
                let cols = j * dst;
                if i == j {
                    for o in 0..dst {
                        a[(o, cols + o)] += c64(1.0, 0.0);
                    }
                }
                // x^k ⊗ a_l(w) lands in row block k.
                for k in 0..dim {
                    for (l, prev_l) in prev.iter().enumerate() {
                        let coeff = t.entry(i, j, k, l);
                        if coeff == c64(0.0, 0.0) {
                            continue;
                        }
                        let mut block = a.view_mut((k * inner, cols), (inner, dst));
                        block.zip_apply(prev_l, |x, y| *x += coeff * y);
                    }
                }
            }
            out.push(a);
        }
        Ok(out)
    }

    /// `c_i` on sector `n`, species 1-based.
    pub fn creation_matrix(&self, species: usize, n: usize) -> Result<Matrix, FockError> {
        let i = self.check_species(species)?;
        Ok(self.creators(n)?[i].clone())
    }

    /// `a_i` on sector `n ≥ 1`, species 1-based.
    pub fn annihilation_matrix(&self, species: usize, n: usize) -> Result<Matrix, FockError> {
        let i = self.check_species(species)?;
        Ok(self.annihilators(n)?[i].clone())
    }

    fn gram_arc(&self, n: usize) -> Result<Arc<Matrix>, FockError> {
        self.cache.grams.get_or_try_insert((self.key, n), || {
            if n == 0 {
                return Ok(identity(1));
            }
            let dim = self.dim();
            let size = self.size(n)?;
            let prev = self.gram_arc(n - 1)?;
            let annihilators = self.annihilators(n)?;
            let block = size / dim;
            // ⟨x^i v, u⟩ = ⟨v, a_i u⟩: row block i of G_n is G_{n−1}·a_i.
            let mut g = Matrix::zeros(size, size);
            for (i, a) in annihilators.iter().enumerate() {
                g.view_mut((i * block, 0), (block, size))
                    .copy_from(&(prev.as_ref() * a));
            }
            Ok(g)
        })
    }

    /// Gram matrix of the full sector `n`.
    pub fn gram_matrix(&self, n: usize) -> Result<GramMatrix, FockError> {
        Ok(GramMatrix {
            n,
            quotient: false,
            mat: self.gram_arc(n)?.as_ref().clone(),
        })
    }

    fn report_for(&self, n: usize, gram: &Matrix) -> Result<PositivityReport, FockError> {
        let tol = self.config.tol;
        let spectrum = hermitian_spectrum(gram, tol)?;
        let min_eig = spectrum.first().copied();
        let kernel_dim = kernel_basis(gram, tol).len();
        let positive_semidefinite = min_eig.is_none_or(|e| e >= -tol.eps());
        let positive_definite =
            positive_semidefinite && kernel_dim == 0 && min_eig.is_none_or(|e| e > 0.0);
        Ok(PositivityReport {
            n,
            min_eig,
            kernel_dim,
            positive_semidefinite,
            positive_definite,
        })
    }

    pub fn positivity_report(&self, n: usize) -> Result<PositivityReport, FockError> {
        let g = self.gram_arc(n)?;
        self.report_for(n, &g)
    }

    pub fn quotient_positivity_report(&self, n: usize) -> Result<PositivityReport, FockError> {
        let g = self.quotient_gram(n)?;
        self.report_for(n, &g.mat)
    }

    pub fn gram_spectrum(&self, n: usize, quotient: bool) -> Result<Vec<f64>, FockError> {
        let g = if quotient {
            self.quotient_gram(n)?.mat
        } else {
            self.gram_arc(n)?.as_ref().clone()
        };
        Ok(hermitian_spectrum(&g, self.config.tol)?)
    }

    /// Kernel of `P₂ = id + T̃`.
    pub fn p2_kernel(&self) -> Vec<Vector> {
        let n = self.dim();
        let p2 = identity(n * n) + build_ttilde(&self.system.cross);
        kernel_basis(&p2, self.config.tol)
    }

    /// Orthonormal basis of `S_n = Σ_p id^{⊗p} ⊗ Im(id − B) ⊗ id^{⊗(n−p−2)}`.
    ///
    /// Empty for `n < 2`.
    pub fn ideal_subspace(&self, n: usize) -> Result<Vec<Vector>, FockError> {
        Ok(self.ideal_and_complement(n)?.0)
    }

    fn ideal_and_complement(&self, n: usize) -> Result<(Vec<Vector>, Vec<Vector>), FockError> {
        let braid = self.system.braid.as_ref().ok_or(FockError::NoBraid)?;
        let dim = self.dim();
        let size = self.size(n)?;
        let tol = self.config.tol;
        if n < 2 {
            return Ok(span_and_complement(&[], size, tol));
        }
        let pair = dim * dim;
        let relation = identity(pair) - braid.matrix();
        let columns: Vec<Vector> = (0..pair).map(|j| relation.column(j).into_owned()).collect();
        let (image, _) = span_and_complement(&columns, pair, tol);

        let mut generators = Vec::new();
        for p in 0..n - 1 {
            let left = dim.pow(p as u32);
            let right = dim.pow((n - p - 2) as u32);
            for u in 0..left {
                for b in &image {
                    for v in 0..right {
                        let mut g = Vector::zeros(size);
                        for (idx, z) in b.iter().enumerate() {
                            g[(u * pair + idx) * right + v] = *z;
                        }
                        generators.push(g);
                    }
                }
            }
        }
        Ok(span_and_complement(&generators, size, tol))
    }

    fn quotient(&self, n: usize) -> Result<Arc<Quotient>, FockError> {
        let eps_bits = self.config.tol.eps().to_bits();
        self.cache
            .quotients
            .get_or_try_insert((self.key, n, eps_bits), || {
                let size = self.size(n)?;
                let (ideal, complement) = self.ideal_and_complement(n)?;
                let ideal = columns_to_matrix(&ideal, size);
                let complement = columns_to_matrix(&complement, size);
                let projector = &complement * dagger(&complement);
                Ok(Quotient {
                    ideal,
                    complement,
                    projector,
                })
            })
    }

    /// Sector `n` of `TE / I` with orthogonal-complement representatives.
    pub fn quotient_sector(&self, n: usize) -> Result<FockSector, FockError> {
        let mut sector = self.sector_basis(n)?;
        sector.quotient = Some(self.quotient(n)?);
        Ok(sector)
    }

    /// `Q_nᵀ G_n Q_n` on the quotient sector.
    pub fn quotient_gram(&self, n: usize) -> Result<GramMatrix, FockError> {
        let q = self.quotient(n)?;
        let g = self.gram_arc(n)?;
        Ok(GramMatrix {
            n,
            quotient: true,
            mat: dagger(&q.complement) * g.as_ref() * &q.complement,
        })
    }

    /// Creation/annihilation for species `i` (1-based) compressed to quotient
    /// sectors, after checking that both preserve the ideal.
    pub fn descended_operators(&self, species: usize, n: usize) -> Result<DescendedOperators, FockError> {
        let i = self.check_species(species)?;
        let eps = self.config.tol.eps();
        let here = self.quotient(n)?;
        let up = self.quotient(n + 1)?;

        let c = &self.creators(n)?[i];
        let creation_residual = max_abs(&(dagger(&up.complement) * c * &here.ideal));
        if creation_residual > eps {
            return Err(FockError::NotWellDefined {
                operator: "creation",
                species,
                degree: n,
                residual: creation_residual,
            });
        }
        let creation = dagger(&up.complement) * c * &here.complement;

        let (annihilation, annihilation_residual) = if n >= 1 {
            let down = self.quotient(n - 1)?;
            let a = &self.annihilators(n)?[i];
            let residual = max_abs(&(dagger(&down.complement) * a * &here.ideal));
            if residual > eps {
                return Err(FockError::NotWellDefined {
                    operator: "annihilation",
                    species,
                    degree: n,
                    residual,
                });
            }
            (Some(dagger(&down.complement) * a * &here.complement), residual)
        } else {
            (None, 0.0)
        };

        Ok(DescendedOperators {
            species,
            n,
            creation,
            annihilation,
            creation_residual,
            annihilation_residual,
        })
    }

    /// `max_i |c_i^† G_{n+1} − G_n a_i|` between sectors `n` and `n + 1`.
    pub fn adjointness_residual(&self, n: usize, quotient: bool) -> Result<f64, FockError> {
        let mut worst = 0.0_f64;
        if quotient {
            let g_n = self.quotient_gram(n)?.mat;
            let g_up = self.quotient_gram(n + 1)?.mat;
            for species in 1..=self.dim() {
                let c = self.descended_operators(species, n)?.creation;
                let a = self
                    .descended_operators(species, n + 1)?
                    .annihilation
                    .expect("degree n+1 >= 1");
                worst = worst.max(max_abs_diff(&(dagger(&c) * &g_up), &(&g_n * a)));
            }
        } else {
            let g_n = self.gram_arc(n)?;
            let g_up = self.gram_arc(n + 1)?;
            let creators = self.creators(n)?;
            let annihilators = self.annihilators(n + 1)?;
            for (c, a) in creators.iter().zip(annihilators.iter()) {
                worst = worst.max(max_abs_diff(&(dagger(c) * g_up.as_ref()), &(g_n.as_ref() * a)));
            }
        }
        Ok(worst)
    }

    /// `max_{ij} |a_i c_j − Σ_{kl} T^{ij}_{kl} c_k a_l − δ^{ij}|` on sector `n`.
    pub fn commutation_residual(&self, n: usize, quotient: bool) -> Result<f64, FockError> {
        let dim = self.dim();
        // (a on n+1, c on n, c on n−1, a on n), all per species.
        let mut a_up = Vec::with_capacity(dim);
        let mut c_here = Vec::with_capacity(dim);
        let mut c_down = Vec::with_capacity(dim);
        let mut a_here = Vec::with_capacity(dim);
        let size;
        if quotient {
            size = self.quotient(n)?.dim();
            for s in 1..=dim {
                let here = self.descended_operators(s, n)?;
                let up = self.descended_operators(s, n + 1)?;
                a_up.push(up.annihilation.expect("degree n+1 >= 1"));
                c_here.push(here.creation);
                if let Some(a) = here.annihilation {
                    a_here.push(a);
                    c_down.push(self.descended_operators(s, n - 1)?.creation);
                }
            }
        } else {
            size = self.size(n)?;
            a_up.extend(self.annihilators(n + 1)?.iter().cloned());
            c_here.extend(self.creators(n)?.iter().cloned());
            if n >= 1 {
                a_here.extend(self.annihilators(n)?.iter().cloned());
                c_down.extend(self.creators(n - 1)?.iter().cloned());
            }
        }

        let t = &self.system.cross;
        let mut worst = 0.0_f64;
        for (i, a_i) in a_up.iter().enumerate().take(dim) {
            for (j, c_j) in c_here.iter().enumerate().take(dim) {
                let mut lhs = a_i * c_j;
                if i == j {
                    lhs -= identity(size);
                }
                for (k, c_k) in c_down.iter().enumerate() {
                    for (l, a_l) in a_here.iter().enumerate() {
                        let coeff = t.entry(i, j, k, l);
                        if coeff != c64(0.0, 0.0) {
                            lhs -= (c_k * a_l) * coeff;
                        }
                    }
                }
                worst = worst.max(max_abs(&lhs));
            }
        }
        Ok(worst)
    }

    /// Summary of sector `n`: dimensions, spectrum, and the representation checks.
    pub fn sector_report(&self, n: usize, quotient: bool) -> Result<SectorReport, FockError> {
        let tol = self.config.tol;
        let status = |ok: bool| if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        let mut checks = BTreeMap::new();

        let (gram, quotient_dim) = if quotient {
            let q = self.quotient(n)?;
            (self.quotient_gram(n)?.mat, Some(q.dim()))
        } else {
            (self.gram_arc(n)?.as_ref().clone(), None)
        };
        let herm = hermitian_residual(&gram)?;
        checks.insert(
            "gram_hermitian".to_string(),
            SectorCheck { status: status(tol.accepts(herm)), residual: herm },
        );

        if quotient {
            let mut worst = 0.0_f64;
            let mut ok = true;
            for s in 1..=self.dim() {
                match self.descended_operators(s, n) {
                    Ok(d) => worst = worst.max(d.creation_residual).max(d.annihilation_residual),
                    Err(FockError::NotWellDefined { residual, .. }) => {
                        ok = false;
                        worst = worst.max(residual);
                    }
                    Err(e) => return Err(e),
                }
            }
            checks.insert(
                "well_defined".to_string(),
                SectorCheck { status: status(ok), residual: worst },
            );
            if !ok {
                let report = self.report_for(n, &gram)?;
                return Ok(SectorReport {
                    sector: n,
                    dim: self.size(n)?,
                    quotient_dim,
                    min_eig: report.min_eig,
                    kernel_dim: report.kernel_dim,
                    checks,
                });
            }
        }

        let adj = self.adjointness_residual(n, quotient)?;
        checks.insert(
            "adjointness".to_string(),
            SectorCheck { status: status(tol.accepts(adj)), residual: adj },
        );
        let comm = self.commutation_residual(n, quotient)?;
        checks.insert(
            "commutation".to_string(),
            SectorCheck { status: status(tol.accepts(comm)), residual: comm },
        );

        let report = self.report_for(n, &gram)?;
        checks.insert(
            "positive_semidefinite".to_string(),
            SectorCheck {
                status: status(report.positive_semidefinite),
                residual: report.min_eig.map_or(0.0, |e| (-e).max(0.0)),
            },
        );
        Ok(SectorReport {
            sector: n,
            dim: self.size(n)?,
            quotient_dim,
            min_eig: report.min_eig,
            kernel_dim: report.kernel_dim,
            checks,
        })
    }
}
