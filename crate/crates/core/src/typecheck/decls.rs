use std::fmt;

use crate::syntax::{Context, Decl, DeclarationFile, Pos};

use super::{ExtensionFlags, Global, Globals, TypeError};

/// A type error located at a declaration.
#[derive(Clone, Debug, PartialEq)]
pub struct DeclError {
    pub name: String,
    pub pos: Pos,
    pub error: TypeError,
}

impl fmt::Display for DeclError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: in `{}`: {}", self.pos, self.name, self.error)
    }
}

impl std::error::Error for DeclError {}

/// Checks one declaration and adds it to `globals`.
///
/// A name that is already bound is accepted only if the new declaration is
/// α-equal to the old one.
pub fn check_decl(
    globals: &mut Globals,
    decl: &Decl,
    flags: ExtensionFlags,
    fuel: u64,
) -> Result<(), DeclError> {
    let at = |error| DeclError {
        name: decl.name().to_string(),
        pos: decl.pos(),
        error,
    };
    let ctx = Context::new();
    let entry = {
        let mut ck = super::Checker::new(globals, flags).with_fuel(fuel);
        match decl {
            Decl::Def { ty, body, .. } => {
                let ty = match ty {
                    Some(ty) => {
                        ck.sort_of(&ctx, ty).map_err(at)?;
                        ck.check(&ctx, body, ty).map_err(at)?;
                        ty.clone()
                    }
                    None => ck.infer(&ctx, body).map_err(at)?,
                };
                Global {
                    ty,
                    body: Some(body.clone()),
                    flags,
                }
            }
            Decl::Postulate { ty, .. } => {
                ck.sort_of(&ctx, ty).map_err(at)?;
                Global {
                    ty: ty.clone(),
                    body: None,
                    flags,
                }
            }
        }
    };
    if let Some(old) = globals.get(decl.name()) {
        if old.body != entry.body || old.ty != entry.ty {
            return Err(at(TypeError::DuplicateVariable(decl.name().to_string())));
        }
        return Ok(());
    }
    globals.insert(decl.name().clone(), entry);
    Ok(())
}

/// Checks a whole file in order under its own `#ext` pragmas joined with
/// `extra` flags.
pub fn check_file(
    globals: &mut Globals,
    file: &DeclarationFile,
    extra: ExtensionFlags,
    fuel: u64,
) -> Result<ExtensionFlags, DeclError> {
    let flags = ExtensionFlags::from_pragmas(&file.extensions)
        .map_err(|error| DeclError {
            name: "#ext".into(),
            pos: Pos { line: 1, col: 1 },
            error,
        })?
        .join(extra);
    for d in &file.decls {
        check_decl(globals, d, flags, fuel)?;
    }
    Ok(flags)
}
