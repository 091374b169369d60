/** Parses member unique names like `[PaID].[Gender].[All].[Female]`
 * (with `]]` escaping a literal `]`). */

export function parseUniqueName(name: string): string[] {
  const segments: string[] = [];
  let i = 0;
  while (i < name.length) {
    if (name[i] !== "[") {
      i += 1;
      continue;
    }
    i += 1;
    let segment = "";
    while (i < name.length) {
      if (name[i] === "]") {
        if (name[i + 1] === "]") {
          segment += "]";
          i += 2;
          continue;
        }
        i += 1;
        break;
      }
      segment += name[i];
      i += 1;
    }
    segments.push(segment);
  }
  return segments;
}

/** Key path (after [Role].[Hier].[All]) of a member unique name. */
export function keyPathOf(uniqueName: string): string[] {
  return parseUniqueName(uniqueName).slice(3);
}
