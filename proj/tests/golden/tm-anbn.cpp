#define typeof decltype
template<typename x> struct B {};
struct E {};
template<typename x> struct a {};
template<typename x> struct b {};
template<typename xL, typename x, typename xR> struct O {};
template<typename xL, typename xR> E q4(O<xL, B<E>, xR>) {}
template<typename xL, typename xR> E q4(O<xL, a<E>, xR>) {}
template<typename xL, typename xR> E q4(O<xL, b<E>, xR>) {}
template<typename xL, typename xR> typeof(q4(O<xL, B<E>, B<xR>>())) q0(O<B<xL>, B<E>, xR>) {}
template<typename xR> typeof(q4(O<E, B<E>, B<xR>>())) q0(O<E, B<E>, xR>) {}
template<typename xL, typename xR> typeof(q4(O<xL, a<E>, B<xR>>())) q0(O<a<xL>, B<E>, xR>) {}
template<typename xL, typename xR> typeof(q4(O<xL, b<E>, B<xR>>())) q0(O<b<xL>, B<E>, xR>) {}
template<typename xL, typename xR> typeof(q1(O<B<xL>, B<E>, xR>())) q0(O<xL, a<E>, B<xR>>) {}
template<typename xL> typeof(q1(O<B<xL>, B<E>, E>())) q0(O<xL, a<E>, E>) {}
template<typename xL, typename xR> typeof(q1(O<B<xL>, a<E>, xR>())) q0(O<xL, a<E>, a<xR>>) {}
template<typename xL, typename xR> typeof(q1(O<B<xL>, b<E>, xR>())) q0(O<xL, a<E>, b<xR>>) {}
template<typename xL, typename xR> typeof(q2(O<xL, B<E>, B<xR>>())) q1(O<B<xL>, B<E>, xR>) {}
template<typename xR> typeof(q2(O<E, B<E>, B<xR>>())) q1(O<E, B<E>, xR>) {}
template<typename xL, typename xR> typeof(q2(O<xL, a<E>, B<xR>>())) q1(O<a<xL>, B<E>, xR>) {}
template<typename xL, typename xR> typeof(q2(O<xL, b<E>, B<xR>>())) q1(O<b<xL>, B<E>, xR>) {}
template<typename xL, typename xR> typeof(q1(O<a<xL>, B<E>, xR>())) q1(O<xL, a<E>, B<xR>>) {}
template<typename xL> typeof(q1(O<a<xL>, B<E>, E>())) q1(O<xL, a<E>, E>) {}
template<typename xL, typename xR> typeof(q1(O<a<xL>, a<E>, xR>())) q1(O<xL, a<E>, a<xR>>) {}
template<typename xL, typename xR> typeof(q1(O<a<xL>, b<E>, xR>())) q1(O<xL, a<E>, b<xR>>) {}
template<typename xL, typename xR> typeof(q1(O<b<xL>, B<E>, xR>())) q1(O<xL, b<E>, B<xR>>) {}
template<typename xL> typeof(q1(O<b<xL>, B<E>, E>())) q1(O<xL, b<E>, E>) {}
template<typename xL, typename xR> typeof(q1(O<b<xL>, a<E>, xR>())) q1(O<xL, b<E>, a<xR>>) {}
template<typename xL, typename xR> typeof(q1(O<b<xL>, b<E>, xR>())) q1(O<xL, b<E>, b<xR>>) {}
template<typename xL, typename xR> typeof(q3(O<xL, B<E>, B<xR>>())) q2(O<B<xL>, b<E>, xR>) {}
template<typename xR> typeof(q3(O<E, B<E>, B<xR>>())) q2(O<E, b<E>, xR>) {}
template<typename xL, typename xR> typeof(q3(O<xL, a<E>, B<xR>>())) q2(O<a<xL>, b<E>, xR>) {}
template<typename xL, typename xR> typeof(q3(O<xL, b<E>, B<xR>>())) q2(O<b<xL>, b<E>, xR>) {}
template<typename xL, typename xR> typeof(q0(O<B<xL>, B<E>, xR>())) q3(O<xL, B<E>, B<xR>>) {}
template<typename xL> typeof(q0(O<B<xL>, B<E>, E>())) q3(O<xL, B<E>, E>) {}
template<typename xL, typename xR> typeof(q0(O<B<xL>, a<E>, xR>())) q3(O<xL, B<E>, a<xR>>) {}
template<typename xL, typename xR> typeof(q0(O<B<xL>, b<E>, xR>())) q3(O<xL, B<E>, b<xR>>) {}
template<typename xL, typename xR> typeof(q3(O<xL, B<E>, a<xR>>())) q3(O<B<xL>, a<E>, xR>) {}
template<typename xR> typeof(q3(O<E, B<E>, a<xR>>())) q3(O<E, a<E>, xR>) {}
template<typename xL, typename xR> typeof(q3(O<xL, a<E>, a<xR>>())) q3(O<a<xL>, a<E>, xR>) {}
template<typename xL, typename xR> typeof(q3(O<xL, b<E>, a<xR>>())) q3(O<b<xL>, a<E>, xR>) {}
template<typename xL, typename xR> typeof(q3(O<xL, B<E>, b<xR>>())) q3(O<B<xL>, b<E>, xR>) {}
template<typename xR> typeof(q3(O<E, B<E>, b<xR>>())) q3(O<E, b<E>, xR>) {}
template<typename xL, typename xR> typeof(q3(O<xL, a<E>, b<xR>>())) q3(O<a<xL>, b<E>, xR>) {}
template<typename xL, typename xR> typeof(q3(O<xL, b<E>, b<xR>>())) q3(O<b<xL>, b<E>, xR>) {}
int main() {
  E w1=q0(O<E, a<E>, a<a<a<b<b<b<b<E>>>>>>>>());
  E w2=q0(O<E, a<E>, a<a<a<b<a<b<b<E>>>>>>>>());
  E w3=q0(O<E, a<E>, a<a<b<b<b<b<E>>>>>>>());
}
