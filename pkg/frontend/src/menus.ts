/**
 * Contextual menus and their inline forms.
 *
 * One menu at a time, appended to document.body. Items either run
 * immediately or unfold into a small form inside the menu; submitting
 * collects the named values and hands them to the item. Buttons carry
 * data-op with the operator they will emit, which is also what the
 * tests drive.
 */

export interface FormField {
  name: string;
  label: string;
  kind: "select" | "text";
  options?: string[];
  value?: string;
  placeholder?: string;
}

export interface MenuItem {
  /** Operator the item emits; becomes the button's data-op. */
  op: string;
  label: string;
  fields?: FormField[];
  run(values: Record<string, string>): void;
}

let dismiss: ((ev: MouseEvent) => void) | null = null;

export function closeMenu(): void {
  document.querySelectorAll(".ctx-menu").forEach((el) => el.remove());
  if (dismiss) {
    document.removeEventListener("click", dismiss);
    dismiss = null;
  }
}

function buildForm(item: MenuItem, menu: HTMLElement): void {
  const form = document.createElement("form");
  form.setAttribute("data-op-form", item.op);
  for (const field of item.fields ?? []) {
    const row = document.createElement("label");
    row.textContent = field.label + " ";
    let input: HTMLSelectElement | HTMLInputElement;
    if (field.kind === "select") {
      input = document.createElement("select");
      for (const opt of field.options ?? []) {
        const o = document.createElement("option");
        o.value = opt;
        o.textContent = opt;
        input.appendChild(o);
      }
      if (field.value !== undefined) {
        input.value = field.value;
      }
    } else {
      input = document.createElement("input");
      input.type = "text";
      input.value = field.value ?? "";
      if (field.placeholder) {
        input.placeholder = field.placeholder;
      }
    }
    input.name = field.name;
    row.appendChild(input);
    form.appendChild(row);
  }
  const submit = document.createElement("button");
  submit.type = "submit";
  submit.setAttribute("data-submit", item.op);
  submit.textContent = "Apply";
  form.appendChild(submit);
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const values: Record<string, string> = {};
    for (const el of Array.from(form.elements)) {
      const input = el as HTMLInputElement;
      if (input.name) {
        values[input.name] = input.value;
      }
    }
    closeMenu();
    item.run(values);
  });
  menu.replaceChildren(form);
}

export function openMenu(anchor: HTMLElement, items: MenuItem[]): void {
  closeMenu();
  if (items.length === 0) {
    return;
  }
  const menu = document.createElement("div");
  menu.className = "ctx-menu";
  menu.style.position = "absolute";
  const rect = anchor.getBoundingClientRect();
  menu.style.left = `${rect.left}px`;
  menu.style.top = `${rect.bottom}px`;

  for (const item of items) {
    const btn = document.createElement("button");
    btn.setAttribute("data-op", item.op);
    btn.textContent = item.label;
    btn.addEventListener("click", (ev) => {
      ev.stopPropagation();
      if (item.fields && item.fields.length > 0) {
        buildForm(item, menu);
      } else {
        closeMenu();
        item.run({});
      }
    });
    menu.appendChild(btn);
  }

  document.body.appendChild(menu);
  // a click outside the menu dismisses it; clicks inside (form fields) do not
  setTimeout(() => {
    dismiss = (ev: MouseEvent) => {
      if (!menu.contains(ev.target as Node)) {
        closeMenu();
      }
    };
    document.addEventListener("click", dismiss);
  }, 0);
}
