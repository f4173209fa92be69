// DOM helpers. Numbers from the service are rendered verbatim through
// renderNumber, which tags the element so the contract tests can trace
// every rendered number back to a service response value.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderNumber(
  tag: keyof HTMLElementTagNameMap,
  value: number,
  className?: string,
): HTMLElement {
  const node = el(tag, className);
  node.textContent = String(value);
  node.setAttribute("data-number", String(value));
  return node;
}

/** Probability bar whose width is scaled by CSS, not by client math. */
export function probabilityBar(value: number): HTMLElement {
  const wrap = el("div", "bar-track");
  const fill = el("div", "bar-fill");
  fill.style.width = `calc(100% * ${value})`;
  wrap.appendChild(fill);
  wrap.appendChild(renderNumber("span", value, "bar-value"));
  return wrap;
}

export function clear(node: HTMLElement): void {
  node.innerHTML = "";
}
