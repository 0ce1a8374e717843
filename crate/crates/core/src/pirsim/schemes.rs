use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pirsim::store::SymbolStore;
use crate::pirsim::{
    AccessLog, Backend, Database, Query, Randomness, SchemeId, ServerRecord, Transcript,
};

fn check_len(what: &str, v: &BitVec, expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::dim(format!(
            "{what} has length {}, expected {expected}",
            v.len()
        )));
    }
    Ok(())
}

fn check_f(f: usize, m: usize) -> Result<()> {
    if f == 0 || f > m {
        return Err(Error::param(format!("file index {f} outside 1..={m}")));
    }
    Ok(())
}

fn with_unit(v: &BitVec, index: usize) -> BitVec {
    let mut out = v.clone();
    out.flip(index);
    out
}

/// The queries each server receives, in server order, for file `f` (1-based)
/// under the given randomness. Independent of the database contents.
pub fn scheme_queries(
    scheme: SchemeId,
    n: usize,
    m: usize,
    f: usize,
    randomness: &Randomness,
) -> Result<Vec<Vec<Query>>> {
    check_f(f, m)?;
    match (scheme, randomness) {
        (SchemeId::TwoServer, Randomness::Vector(a)) => {
            check_len("a", a, m)?;
            Ok(vec![
                vec![Query::Linear(a.clone())],
                vec![Query::Linear(with_unit(a, f - 1))],
            ])
        }
        (SchemeId::Replicated, Randomness::Vector(v)) => {
            if n < 2 {
                return Err(Error::param("replicated scheme needs N >= 2"));
            }
            check_len("v", v, (n - 1) * m)?;
            let mut out: Vec<Vec<Query>> = (1..n)
                .map(|server| vec![Query::Linear(with_unit(v, (f - 1) * (n - 1) + server - 1))])
                .collect();
            out.push(vec![Query::Linear(v.clone())]);
            Ok(out)
        }
        (SchemeId::Mds32, Randomness::Pair(a, b)) => {
            check_len("a", a, m)?;
            check_len("b", b, m)?;
            let af = with_unit(a, f - 1);
            let bf = with_unit(b, f - 1);
            Ok(vec![
                vec![Query::Linear(af), Query::Linear(b.clone())],
                vec![Query::Linear(a.clone()), Query::Linear(bf)],
                vec![Query::Linear(a.clone()), Query::Linear(b.clone())],
            ])
        }
        (SchemeId::Bep, Randomness::Shifts(z)) => {
            if n < 2 {
                return Err(Error::param("shift scheme needs N >= 2"));
            }
            if z.len() != m {
                return Err(Error::dim(format!(
                    "z has {} entries, expected {m}",
                    z.len()
                )));
            }
            if let Some(bad) = z.iter().find(|&&x| x >= n) {
                return Err(Error::param(format!("shift {bad} is not in Z_{n}")));
            }
            Ok((1..=n)
                .map(|server| {
                    let mut b = z.clone();
                    b[f - 1] = (z[f - 1] + server) % n;
                    vec![Query::Shifts(b)]
                })
                .collect())
        }
        (scheme, r) => Err(Error::param(format!(
            "randomness {r:?} does not fit scheme {scheme}"
        ))),
    }
}

/// Coefficient vector over the `(N-1) * M` substrings selected by a shift query.
fn shift_coeffs(shifts: &[usize], parts: usize) -> BitVec {
    let mut c = BitVec::zeros(shifts.len() * parts);
    for (m, &b) in shifts.iter().enumerate() {
        if b != 0 {
            c.set(m * parts + b - 1, true);
        }
    }
    c
}

fn serve(store: &dyn SymbolStore, queries: Vec<Query>, parts: usize) -> Result<ServerRecord> {
    let answers = queries
        .iter()
        .map(|q| match q {
            Query::Linear(c) => store.answer(c),
            Query::Shifts(b) => store.answer(&shift_coeffs(b, parts)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ServerRecord {
        queries,
        responses: answers.iter().map(|a| a.value.clone()).collect(),
        access: AccessLog::from_answers(&answers, store.symbol_len()),
    })
}

fn divisible(db: &Database, parts: usize) -> Result<()> {
    if parts == 0 || !db.file_bits().is_multiple_of(parts) {
        return Err(Error::param(format!(
            "file length {} is not divisible by {parts}",
            db.file_bits()
        )));
    }
    Ok(())
}

/// Two replicated servers; server 1 gets `a`, server 2 gets `a + e_f`.
pub fn scheme_two_server(
    db: &Database,
    f: usize,
    a: &BitVec,
    backend: &Backend,
) -> Result<Transcript> {
    let randomness = Randomness::Vector(a.clone());
    let queries = scheme_queries(SchemeId::TwoServer, 2, db.num_files(), f, &randomness)?;
    let store = backend.store(db.files())?;
    let servers = queries
        .into_iter()
        .map(|q| serve(store.as_ref(), q, 1))
        .collect::<Result<Vec<_>>>()?;
    let reconstructed = &servers[0].responses[0] ^ &servers[1].responses[0];
    Ok(Transcript {
        scheme: SchemeId::TwoServer,
        files: db.num_files(),
        file_bits: db.file_bits(),
        f,
        randomness,
        servers,
        reconstructed,
    })
}

/// `N` replicated servers. Server `n < N` receives `v + e_{(f-1)(N-1)+n}` and
/// server `N` receives `v`; the difference of the two answers is substring
/// `n` of file `f`.
pub fn scheme_replicated(
    n: usize,
    db: &Database,
    f: usize,
    v: &BitVec,
    backend: &Backend,
) -> Result<Transcript> {
    let randomness = Randomness::Vector(v.clone());
    let queries = scheme_queries(SchemeId::Replicated, n, db.num_files(), f, &randomness)?;
    let parts = n - 1;
    divisible(db, parts)?;
    let store = backend.store(&db.substrings(parts)?)?;
    let servers = queries
        .into_iter()
        .map(|q| serve(store.as_ref(), q, parts))
        .collect::<Result<Vec<_>>>()?;
    let mask = &servers[n - 1].responses[0];
    let pieces: Vec<BitVec> = servers[..n - 1]
        .iter()
        .map(|s| &s.responses[0] ^ mask)
        .collect();
    Ok(Transcript {
        scheme: SchemeId::Replicated,
        files: db.num_files(),
        file_bits: db.file_bits(),
        f,
        randomness,
        servers,
        reconstructed: BitVec::concat(&pieces),
    })
}

/// Three servers storing the first halves, the second halves, and their
/// sums. Each server answers two queries.
pub fn scheme_mds32(
    db: &Database,
    f: usize,
    a: &BitVec,
    b: &BitVec,
    backend: &Backend,
) -> Result<Transcript> {
    let randomness = Randomness::Pair(a.clone(), b.clone());
    let queries = scheme_queries(SchemeId::Mds32, 3, db.num_files(), f, &randomness)?;
    divisible(db, 2)?;
    let halves = db.substrings(2)?;
    let first: Vec<BitVec> = halves.iter().step_by(2).cloned().collect();
    let second: Vec<BitVec> = halves.iter().skip(1).step_by(2).cloned().collect();
    let sums: Vec<BitVec> = first.iter().zip(&second).map(|(x, y)| x ^ y).collect();

    let servers = [first, second, sums]
        .iter()
        .zip(queries)
        .map(|(data, q)| serve(backend.store(data)?.as_ref(), q, 1))
        .collect::<Result<Vec<_>>>()?;

    let [one, two, three] = [&servers[0], &servers[1], &servers[2]].map(|s| &s.responses);
    // sum a_i x^i_1, then cancel it from server I's first answer
    let a_first = &three[0] ^ &two[0];
    let piece1 = &one[0] ^ &a_first;
    let b_second = &three[1] ^ &one[1];
    let piece2 = &two[1] ^ &b_second;

    Ok(Transcript {
        scheme: SchemeId::Mds32,
        files: db.num_files(),
        file_bits: db.file_bits(),
        f,
        randomness,
        servers,
        reconstructed: BitVec::concat([&piece1, &piece2]),
    })
}

/// Shift scheme: server `n` receives `b_f = z_f + n mod N` and `b_m = z_m`
/// otherwise, and returns `sum_m x^m_{b_m}` with `x^m_0 = 0`.
pub fn scheme_bep(
    n: usize,
    db: &Database,
    f: usize,
    z: &[usize],
    backend: &Backend,
) -> Result<Transcript> {
    let randomness = Randomness::Shifts(z.to_vec());
    let queries = scheme_queries(SchemeId::Bep, n, db.num_files(), f, &randomness)?;
    let parts = n - 1;
    divisible(db, parts)?;
    let store = backend.store(&db.substrings(parts)?)?;
    let servers = queries
        .into_iter()
        .map(|q| serve(store.as_ref(), q, parts))
        .collect::<Result<Vec<_>>>()?;

    let zf = z[f - 1];
    // the server whose index for file f wraps to 0
    let masker = (n - zf % n) % n;
    let masker = if masker == 0 { n } else { masker };
    let mask = &servers[masker - 1].responses[0];
    let mut pieces = vec![BitVec::zeros(db.file_bits() / parts); parts];
    for server in (1..=n).filter(|&s| s != masker) {
        let j = (zf + server) % n;
        pieces[j - 1] = &servers[server - 1].responses[0] ^ mask;
    }
    Ok(Transcript {
        scheme: SchemeId::Bep,
        files: db.num_files(),
        file_bits: db.file_bits(),
        f,
        randomness,
        servers,
        reconstructed: BitVec::concat(&pieces),
    })
}

/// Dispatches to the scheme named by `scheme`. `n` is ignored by the
/// fixed-size schemes.
pub fn run_scheme(
    scheme: SchemeId,
    n: usize,
    db: &Database,
    f: usize,
    randomness: &Randomness,
    backend: &Backend,
) -> Result<Transcript> {
    db.check_index(f)?;
    match (scheme, randomness) {
        (SchemeId::TwoServer, Randomness::Vector(a)) => scheme_two_server(db, f, a, backend),
        (SchemeId::Replicated, Randomness::Vector(v)) => scheme_replicated(n, db, f, v, backend),
        (SchemeId::Mds32, Randomness::Pair(a, b)) => scheme_mds32(db, f, a, b, backend),
        (SchemeId::Bep, Randomness::Shifts(z)) => scheme_bep(n, db, f, z, backend),
        (scheme, r) => Err(Error::param(format!(
            "randomness {r:?} does not fit scheme {scheme}"
        ))),
    }
}
