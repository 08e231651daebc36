//! The `verify` driver: runs the library's property suites at a chosen seed
//! and case count and reports machine-readable pass/fail per property.
//!
//! A failing case is reported with a witness in `detail` rather than
//! panicking, so every property in a suite always gets a line.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wordlab_core::sampling::{
    random_commutator_product, random_kernel_word, random_nonneutral_word, random_part_word,
    random_product_of, random_word,
};
use wordlab_core::{
    cl_lower_bound, cl_upper_bound, commutator_family, expand, expand_letters, is_commutator,
    lcs_degree, remark_identity_check, rewrite, sup_divergence_table, syllables, weight, Alphabet,
    CertificateParams, ClUpperBound, FoldOrder, FreeWord, LcsDegreeResult, Mat2, MatrixAssignment,
    Part, Split, SubgroupGraph, TowerAlphabet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Props,
    Tower,
    All,
}

#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub id: &'static str,
    pub cases: u64,
    pub pass: bool,
    pub detail: Option<String>,
}

struct Ctx {
    seed: u64,
    cases: u64,
}

impl Ctx {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9).wrapping_add(salt))
    }

    /// Runs `body` over `cases` seeded iterations; the first `Err` becomes
    /// the failing witness.
    fn check(
        &self,
        id: &'static str,
        salt: u64,
        mut body: impl FnMut(&mut ChaCha8Rng) -> Result<(), String>,
    ) -> PropertyResult {
        let mut rng = self.rng(salt);
        for case in 0..self.cases {
            if let Err(witness) = body(&mut rng) {
                return PropertyResult {
                    id,
                    cases: case + 1,
                    pass: false,
                    detail: Some(witness),
                };
            }
        }
        PropertyResult {
            id,
            cases: self.cases,
            pass: true,
            detail: None,
        }
    }

    fn check_once(
        &self,
        id: &'static str,
        body: impl FnOnce() -> Result<(), String>,
    ) -> PropertyResult {
        match body() {
            Ok(()) => PropertyResult {
                id,
                cases: 1,
                pass: true,
                detail: None,
            },
            Err(witness) => PropertyResult {
                id,
                cases: 1,
                pass: false,
                detail: Some(witness),
            },
        }
    }
}

fn fail_if(bad: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if bad {
        Err(witness())
    } else {
        Ok(())
    }
}

fn rank2() -> Arc<Alphabet> {
    Alphabet::new(["a", "b"]).expect("static names")
}

fn mixed_split() -> Split {
    Split::parse("a1,a2|b1,b2").expect("static notation")
}

pub fn run_suite(suite: Suite, seed: u64, cases: u64) -> Vec<PropertyResult> {
    let ctx = Ctx {
        seed,
        cases: cases.max(1),
    };
    let mut results = Vec::new();
    if matches!(suite, Suite::Props | Suite::All) {
        props(&ctx, &mut results);
    }
    if matches!(suite, Suite::Tower | Suite::All) {
        tower(&ctx, &mut results);
    }
    results
}

fn props(ctx: &Ctx, out: &mut Vec<PropertyResult>) {
    let alphabet = rank2();
    let split = mixed_split();
    let ab_split = Split::parse("a|b").expect("static notation");

    out.push(ctx.check("reduce_idempotent", 1, |rng| {
        let raw: Vec<(usize, BigInt)> = (0..rng.gen_range(0..24))
            .map(|_| (rng.gen_range(0..2), BigInt::from(rng.gen_range(-4i64..=4))))
            .collect();
        let once = FreeWord::from_runs(&alphabet, raw).expect("indices in range");
        let twice = FreeWord::from_runs(
            &alphabet,
            once.runs().iter().map(|r| (r.gen, r.exp.clone())),
        )
        .expect("indices in range");
        fail_if(once != twice, || format!("reduction moved {once}"))
    }));

    out.push(ctx.check("concat_length_subadditive", 2, |rng| {
        let u = random_word(rng, &alphabet, 20);
        let v = random_word(rng, &alphabet, 20);
        let joined = u.concat(&v).expect("same alphabet");
        fail_if(
            joined.letter_len() > u.letter_len() + v.letter_len(),
            || format!("|{u} . {v}| grew"),
        )
    }));

    out.push(ctx.check("invert_involution", 3, |rng| {
        let w = random_word(rng, &alphabet, 20);
        fail_if(w.invert().invert() != w, || {
            format!("involution failed on {w}")
        })
    }));

    out.push(ctx.check("abelianize_additive", 4, |rng| {
        let u = random_word(rng, &alphabet, 20);
        let v = random_word(rng, &alphabet, 20);
        let sum = u.abelianize().plus(&v.abelianize());
        fail_if(
            u.concat(&v).expect("same alphabet").abelianize() != sum,
            || format!("additivity failed on {u}, {v}"),
        )
    }));

    out.push(ctx.check("parse_format_roundtrip", 5, |rng| {
        let w = random_word(rng, &alphabet, 20);
        let text = w.to_string();
        let back = wordlab_core::parse(&text, &alphabet).map_err(|e| e.to_string())?;
        fail_if(back != w, || format!("{text:?} reparsed differently"))
    }));

    out.push(ctx.check("eval_matrix_multiplicative", 6, |rng| {
        let mut assignment = MatrixAssignment::new(&alphabet);
        assignment
            .assign(0, Mat2::from_i64([[1, 1], [0, 1]]))
            .expect("unimodular");
        assignment
            .assign(1, Mat2::from_i64([[1, 0], [1, 1]]))
            .expect("unimodular");
        let u = random_word(rng, &alphabet, 12);
        let v = random_word(rng, &alphabet, 12);
        let lhs = wordlab_core::eval_matrix(&u.concat(&v).expect("same alphabet"), &assignment)
            .expect("assigned");
        let rhs = wordlab_core::eval_matrix(&u, &assignment)
            .expect("assigned")
            .mul(&wordlab_core::eval_matrix(&v, &assignment).expect("assigned"));
        fail_if(lhs != rhs, || format!("homomorphism failed on {u}, {v}"))
    }));

    out.push(ctx.check("syllables_reassemble", 7, |rng| {
        let w = random_word(rng, split.alphabet(), 24);
        let form = syllables(&w, &split).map_err(|e| e.to_string())?;
        fail_if(form.reassemble(split.alphabet()) != w, || {
            format!("syllables of {w} do not reassemble")
        })
    }));

    out.push(ctx.check("weight_antisymmetric", 8, |rng| {
        let b = random_part_word(rng, &split, Part::B, 4);
        let w = random_word(rng, split.alphabet(), 30);
        let forward = weight(&w, &split, &b).map_err(|e| e.to_string())?;
        let backward = weight(&w.invert(), &split, &b).map_err(|e| e.to_string())?;
        fail_if(backward != -forward, || {
            format!("antisymmetry failed on {w}")
        })
    }));

    out.push(ctx.check("weight_product_defect_le_3", 9, |rng| {
        let b = random_part_word(rng, &split, Part::B, 4);
        let x = random_word(rng, split.alphabet(), 20);
        let y = random_word(rng, split.alphabet(), 20);
        let wx = weight(&x, &split, &b).map_err(|e| e.to_string())?;
        let wy = weight(&y, &split, &b).map_err(|e| e.to_string())?;
        let wxy =
            weight(&x.concat(&y).expect("same alphabet"), &split, &b).map_err(|e| e.to_string())?;
        fail_if(wxy.abs() > wx.abs() + wy.abs() + 3, || {
            format!("x = {x}, y = {y}, b = {b}: |{wxy}| > |{wx}|+|{wy}|+3")
        })
    }));

    out.push(ctx.check("commutator_weight_le_9", 10, |rng| {
        let b = random_part_word(rng, &split, Part::B, 4);
        let x = random_word(rng, split.alphabet(), 20);
        let y = random_word(rng, split.alphabet(), 20);
        let w = weight(&x.commutator(&y).expect("same alphabet"), &split, &b)
            .map_err(|e| e.to_string())?;
        fail_if(w.abs() > 9, || {
            format!("x = {x}, y = {y}, b = {b}: |{w}| > 9")
        })
    }));

    out.push(ctx.check("k_commutator_weight_le_12k_minus_3", 11, |rng| {
        let k = rng.gen_range(1usize..=6);
        let b = random_part_word(rng, &split, Part::B, 4);
        let alphabet = split.alphabet().clone();
        let product =
            random_commutator_product(rng, &alphabet, k, |rng| random_word(rng, &alphabet, 12));
        let w = weight(&product, &split, &b).map_err(|e| e.to_string())?;
        fail_if(w.abs() > 12 * k as i64 - 3, || {
            format!("k = {k}: |{w}| > {}", 12 * k - 3)
        })
    }));

    out.push(ctx.check("sup_weight_minus_two_l", 12, |rng| {
        let a = random_part_word(rng, &split, Part::A, 5);
        let b = random_part_word(rng, &split, Part::B, 5);
        let rows = sup_divergence_table(6, &split, &a, &b).map_err(|e| e.to_string())?;
        for row in rows {
            fail_if(row.weight != -2 * row.exponent as i64, || {
                format!(
                    "a = {a}, b = {b}, L = {}: weight {}",
                    row.exponent, row.weight
                )
            })?;
        }
        Ok(())
    }));

    out.push(ctx.check("wicks_accepts_commutators", 13, |rng| {
        let x = random_word(rng, &alphabet, 10);
        let y = random_word(rng, &alphabet, 10);
        let c = x.commutator(&y).expect("same alphabet");
        fail_if(!is_commutator(&c), || format!("[{x}, {y}] rejected"))
    }));

    out.push(ctx.check("sandwich_lower_le_upper", 14, |rng| {
        let b = FreeWord::generator(&alphabet, 1).expect("rank 2");
        let w = random_kernel_word(rng, &alphabet, 25);
        let lower = cl_lower_bound(&w, &ab_split, &b).map_err(|e| e.to_string())?;
        let upper = match cl_upper_bound(&w) {
            ClUpperBound::Finite(u) => u,
            ClUpperBound::Infinite => return Err(format!("{w} left the kernel")),
        };
        fail_if(lower > upper, || format!("{w}: {lower} > {upper}"))
    }));

    out.push(ctx.check("schreier_roundtrip", 15, |rng| {
        let w = random_kernel_word(rng, &alphabet, 25);
        let letters = rewrite(&w).map_err(|e| e.to_string())?;
        let back = expand_letters(&alphabet, &letters);
        fail_if(back != w, || format!("round trip of {w} gave {back}"))
    }));

    out.push(ctx.check("schreier_letters_are_commutators", 16, |rng| {
        let w = random_kernel_word(rng, &alphabet, 10);
        for (letter, _) in rewrite(&w).map_err(|e| e.to_string())? {
            let form = letter.word_form();
            fail_if(!form.abelianize().is_zero(), || {
                format!("letter {form} outside the kernel")
            })?;
            fail_if(!is_commutator(&form), || {
                format!("letter {form} is not a commutator")
            })?;
        }
        Ok(())
    }));

    out.push(ctx.check("magnus_multiplicative", 17, |rng| {
        let u = random_word(rng, &alphabet, 10);
        let v = random_word(rng, &alphabet, 10);
        let lhs = expand(&u.concat(&v).expect("same alphabet"), 4).map_err(|e| e.to_string())?;
        let rhs = expand(&u, 4)
            .map_err(|e| e.to_string())?
            .mul(&expand(&v, 4).map_err(|e| e.to_string())?);
        fail_if(lhs != rhs, || {
            format!("expansion not multiplicative on {u}, {v}")
        })
    }));

    out.push(ctx.check("lcs_degree_finite_short", 18, |rng| {
        let w = random_nonneutral_word(rng, &alphabet, 12);
        let cap: usize = usize::try_from(w.letter_len()).unwrap_or(12).max(2);
        match lcs_degree(&w, cap).map_err(|e| e.to_string())? {
            LcsDegreeResult::Degree(_) => Ok(()),
            LcsDegreeResult::ExceedsCap { cap } => {
                Err(format!("{w} has no degree within cap {cap}"))
            }
        }
    }));

    out.push(ctx.check("power_torsion_shadow", 19, |rng| {
        let w = random_nonneutral_word(rng, &alphabet, 10);
        let k = rng.gen_range(2u64..=5);
        let Some(d) = lcs_degree(&w, 8).map_err(|e| e.to_string())?.degree() else {
            return Ok(());
        };
        let dk = lcs_degree(&w.pow(&BigInt::from(k)), 8)
            .map_err(|e| e.to_string())?
            .degree();
        fail_if(dk != Some(d), || format!("deg({w}^{k}) = {dk:?} != {d}"))
    }));

    out.push(ctx.check("commutator_degree_superadditive", 20, |rng| {
        let u = random_nonneutral_word(rng, &alphabet, 8);
        let v = random_nonneutral_word(rng, &alphabet, 8);
        let c = u.commutator(&v).expect("same alphabet");
        if c.is_neutral() {
            return Ok(());
        }
        let (Some(du), Some(dv)) = (
            lcs_degree(&u, 8).map_err(|e| e.to_string())?.degree(),
            lcs_degree(&v, 8).map_err(|e| e.to_string())?.degree(),
        ) else {
            return Ok(());
        };
        if du + dv > 12 {
            return Ok(());
        }
        match lcs_degree(&c, 12).map_err(|e| e.to_string())? {
            LcsDegreeResult::Degree(dc) => fail_if(dc < du + dv, || {
                format!("deg([{u},{v}]) = {dc} < {du}+{dv}")
            }),
            LcsDegreeResult::ExceedsCap { .. } => Ok(()),
        }
    }));

    out.push(ctx.check("stallings_membership_products", 21, |rng| {
        let count = rng.gen_range(1usize..=4);
        let generators: Vec<FreeWord> =
            (0..count).map(|_| random_word(rng, &alphabet, 8)).collect();
        let graph = SubgroupGraph::build(&alphabet, &generators).map_err(|e| e.to_string())?;
        fail_if(graph.rank() > generators.len(), || {
            "rank exceeded".to_string()
        })?;
        for g in &generators {
            fail_if(!graph.contains(g).map_err(|e| e.to_string())?, || {
                format!("generator {g} missing")
            })?;
        }
        let factors = rng.gen_range(0usize..=6);
        let product = random_product_of(rng, &alphabet, &generators, factors);
        fail_if(
            !graph.contains(&product).map_err(|e| e.to_string())?,
            || format!("product {product} missing"),
        )
    }));

    out.push(ctx.check("stallings_folding_confluent", 22, |rng| {
        let count = rng.gen_range(0usize..=4);
        let generators: Vec<FreeWord> = (0..count)
            .map(|_| random_word(rng, &alphabet, 10))
            .collect();
        let fifo = SubgroupGraph::build_ordered(&alphabet, &generators, FoldOrder::FirstInFirstOut)
            .map_err(|e| e.to_string())?;
        let lifo = SubgroupGraph::build_ordered(&alphabet, &generators, FoldOrder::LastInFirstOut)
            .map_err(|e| e.to_string())?;
        fail_if(!fifo.is_isomorphic(&lifo), || {
            format!("orders disagree on {generators:?}")
        })
    }));

    out.push(ctx.check("stallings_basis_regenerates", 23, |rng| {
        let count = rng.gen_range(1usize..=3);
        let generators: Vec<FreeWord> =
            (0..count).map(|_| random_word(rng, &alphabet, 8)).collect();
        let graph = SubgroupGraph::build(&alphabet, &generators).map_err(|e| e.to_string())?;
        let basis = graph.basis();
        fail_if(basis.len() != graph.rank(), || "basis size".to_string())?;
        let rebuilt = SubgroupGraph::build(&alphabet, &basis).map_err(|e| e.to_string())?;
        fail_if(!graph.is_isomorphic(&rebuilt), || {
            format!("basis rebuild differs for {generators:?}")
        })
    }));

    out.push(ctx.check_once("commutator_family_rank", || {
        for limit in [1i64, 2] {
            let family = commutator_family(&alphabet, limit).map_err(|e| e.to_string())?;
            let graph = SubgroupGraph::build(&alphabet, &family).map_err(|e| e.to_string())?;
            fail_if(graph.rank() != family.len(), || {
                format!("limit {limit}: rank {}", graph.rank())
            })?;
        }
        Ok(())
    }));

    out.push(ctx.check_once("remark_identities", || {
        for n in 1..=3u64 {
            let report = remark_identity_check(n, 10, ctx.seed.wrapping_add(n));
            fail_if(!report.all_pass(), || format!("failed at n = {n}"))?;
        }
        Ok(())
    }));
}

fn tower(ctx: &Ctx, out: &mut Vec<PropertyResult>) {
    let tower = TowerAlphabet::new();

    out.push(ctx.check_once("tower_certificate_stages_1_to_3", || {
        let certificate = tower
            .build_certificate(&CertificateParams::default())
            .map_err(|e| e.to_string())?;
        fail_if(!certificate.verdict, || "verdict fail".to_string())?;
        for stage in &certificate.stages {
            fail_if(stage.slack < 1, || {
                format!("stage {} slack {}", stage.n, stage.slack)
            })?;
            fail_if(stage.weight != -2 * stage.l as i64, || {
                format!("stage {} weight {}", stage.n, stage.weight)
            })?;
        }
        Ok(())
    }));

    out.push(ctx.check_once("tower_bonding_abelianization_zero", || {
        fail_if(tower.bonding_abelianization() != [[0i64; 4]; 4], || {
            "nonzero bonding matrix".to_string()
        })
    }));

    out.push(ctx.check_once("tower_colimit_rank_zero", || {
        for stages in [1u64, 3, 6] {
            let rank = tower.cech_colimit_rank(stages).map_err(|e| e.to_string())?;
            fail_if(rank != 0, || format!("rank {rank} at {stages} stages"))?;
        }
        Ok(())
    }));

    out.push(ctx.check_once("tower_split_preservation", || {
        for n in 1..=3u64 {
            for (i, part) in [(1, Part::A), (2, Part::A), (3, Part::B), (4, Part::B)] {
                let w = tower.expand_to_base(n, i).map_err(|e| e.to_string())?;
                fail_if(tower.split().word_part(&w) != Some(part), || {
                    format!("stage {n} generator {i} left its part")
                })?;
            }
        }
        Ok(())
    }));
}
